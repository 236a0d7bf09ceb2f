"""Spread functionals and Heisenberg-type inequalities.

Moments are taken about the lattice origin, not the centroid.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .field import Grid2D, QField2D, l2_norm, tree_sum
from .lct import LCTPair
from .qlct import inverse_tables, qlct_forward, sandwich
from .quaternion import qabs2
from .qwlct import QWLCTMap, qwlct_forward

QLCT_SLACK = 1e-6
QWLCT_SLACK = 1e-4


@dataclass(frozen=True)
class SpreadReport:
    """One checked inequality ``lhs >= bound``; ``margin = lhs - bound``."""

    kind: str
    k: int
    spatial: float
    spectral: float
    lhs: float
    bound: float
    satisfied: bool
    margin: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.bound if self.bound else math.inf

    def as_record(self) -> dict:
        rec = asdict(self)
        rec["ratio"] = self.ratio
        return rec

    def render(self) -> str:
        return "\n".join([
            f"{self.kind} uncertainty, axis {self.k}",
            f"  spatial spread   {self.spatial:.12e}",
            f"  spectral spread  {self.spectral:.12e}",
            f"  lhs              {self.lhs:.12e}",
            f"  bound            {self.bound:.12e}",
            f"  ratio            {self.ratio:.12f}",
            f"  satisfied        {self.satisfied}",
        ])


def _moment_weight(grid: Grid2D, k: int) -> np.ndarray:
    x1, x2 = grid.mesh()
    return (x1 if k == 1 else x2) ** 2


def _check_axis(k: int) -> None:
    if k not in (1, 2):
        raise ValueError(f"axis must be 1 or 2, got {k}")


def spatial_spread(f: QField2D, k: int) -> float:
    """``integral x_k^2 |f(x)|^2 dx``."""
    _check_axis(k)
    terms = (_moment_weight(f.grid, k) * f.abs2()).reshape(-1)
    return float(tree_sum(terms)) * f.grid.cell


def spectral_spread(F: QField2D, k: int) -> float:
    """``integral w_k^2 |F(w)|^2 dw`` for a spectrum on its w-grid."""
    return spatial_spread(F, k)


def qlct_uncertainty_check(f: QField2D, P: LCTPair, wgrid: Grid2D | None = None,
                           k: int = 1) -> SpreadReport:
    _check_axis(k)
    F = qlct_forward(f, P, wgrid)
    spatial = spatial_spread(f, k)
    spectral = spectral_spread(F, k)
    lhs = spatial * spectral
    bound = P.b(k) ** 2 / 4 * l2_norm(f) ** 4
    return SpreadReport("qlct", k, spatial, spectral, lhs, bound,
                        lhs >= bound * (1 - QLCT_SLACK), lhs - bound)


def windowed_spectral_energy_density(G: QWLCTMap, k: int | None) -> float:
    """``sum w_k^2 |G(w, u)|^2 dw du``; with ``k=None`` the weight is 1 and
    the result is the map energy."""
    a2 = qabs2(G.data)
    if k is not None:
        _check_axis(k)
        w2 = G.wgrid.axis(k) ** 2
        a2 = a2 * (w2[:, None, None, None] if k == 1 else w2[None, :, None, None])
    return float(tree_sum(a2.reshape(-1))) * G.cell


def qwlct_uncertainty_check(f: QField2D, phi: QField2D, P: LCTPair, wgrid: Grid2D | None = None,
                            ugrid: Grid2D | None = None, k: int = 1,
                            G: QWLCTMap | None = None) -> SpreadReport:
    """Windowed inequality ``sqrt(sum w_k^2 |G|^2) sqrt(spatial) >= |b_k|/2 ||f||^2 ||phi||``.

    Pass a precomputed map ``G`` to skip the forward transform.
    """
    _check_axis(k)
    if G is None:
        G = qwlct_forward(f, phi, P, wgrid, ugrid)
    spatial = spatial_spread(f, k)
    spectral = windowed_spectral_energy_density(G, k)
    lhs = math.sqrt(spectral) * math.sqrt(spatial)
    bound = abs(P.b(k)) / 2 * l2_norm(f) ** 2 * l2_norm(phi)
    return SpreadReport("qwlct", k, spatial, spectral, lhs, bound,
                        lhs >= bound * (1 - QWLCT_SLACK), lhs - bound)


def windowed_spatial_identity(f: QField2D, phi: QField2D, G: QWLCTMap, P: LCTPair,
                              k: int) -> tuple[float, float]:
    """Both sides of ``||phi||^2 int x_k^2 |f|^2 = int int x_k^2 |L^-1 G(., u)|^2 dx du``.

    The right side inverts every map slice back to the windowed product on
    the signal grid and accumulates its spatial moment.
    """
    return windowed_spatial_identities(f, phi, G, P, (k,))[0]


def windowed_spatial_identities(f: QField2D, phi: QField2D, G: QWLCTMap, P: LCTPair,
                                ks=(1, 2)) -> list[tuple[float, float]]:
    """:func:`windowed_spatial_identity` for several axes from one pass over the slices."""
    for k in ks:
        _check_axis(k)
    xgrid = f.grid
    left, right = inverse_tables(P, xgrid, G.wgrid)
    weights = [_moment_weight(xgrid, k) for k in ks]
    moments = np.empty((len(ks),) + G.ugrid.n)
    for i1 in range(G.ugrid.n[0]):
        local = sandwich(left, np.moveaxis(G.data[:, :, i1], 2, 0), right, G.wgrid.cell)
        a2 = qabs2(local)
        for j, weight in enumerate(weights):
            moments[j, i1] = [float(tree_sum((weight * y).reshape(-1))) for y in a2]
    out = []
    for j, k in enumerate(ks):
        lhs = l2_norm(phi) ** 2 * spatial_spread(f, k)
        rhs = float(tree_sum(moments[j].reshape(-1))) * xgrid.cell * G.ugrid.cell
        out.append((lhs, rhs))
    return out
