"""Theorem checks that produce structured pass/fail records.

Every ``check_*`` computes both sides of one identity or inequality along
independent code paths and wraps the outcome in a :class:`CheckRecord`.  The
CLI ``verify`` command runs :func:`synthetic_battery` (small, fast grids) or
:func:`field_battery` (a user-supplied field); the acceptance suite calls the
same checks on its larger grids.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .field import Grid2D, QField2D, l2_norm, modulate_field, shift_field
from .lct import LCTPair, validate
from .oracle import analytic_qwlct_gaussian_haar, quadrature_qwlct_gaussian_haar
from .qlct import default_wgrid, qlct_forward, qlct_inverse
from .qwlct import (QWLCTMap, boundedness_bound, default_ugrid, map_energy, orthogonality_check,
                    parity_check, predicted_modulation_image, predicted_shift_image,
                    qwlct_forward, qwlct_inverse)
from .uncertainty import (QLCT_SLACK, QWLCT_SLACK, SpreadReport, qlct_uncertainty_check,
                          qwlct_uncertainty_check, windowed_spatial_identities)

DEFAULT_SEED = 20240611

FOURIER_LIKE = LCTPair(validate(0, 1, -1, 0), validate(0, 1, -1, 0))
CHIRPY = LCTPair(validate(2, 1, 1, 1), validate(1, 1, 0, 1))
FRESNEL_MIX = LCTPair(validate(1, 2, 0, 1), validate(0.5, 1, -0.75, 0.5))


@dataclass(frozen=True)
class CheckRecord:
    """Outcome of one check.

    ``relation`` says how ``lhs`` and ``rhs`` are compared: ``"=="`` checks
    ``error <= tolerance``, ``">="`` and ``"<="`` are inequalities whose
    ``error`` is the signed relative margin.
    """

    name: str
    tag: str
    lhs: float
    rhs: float
    error: float
    tolerance: float
    passed: bool
    relation: str = "=="

    def as_record(self) -> dict:
        return asdict(self)

    def render(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name:<44} [{self.tag}] lhs={self.lhs:.9e} "
                f"{self.relation} rhs={self.rhs:.9e}  err={self.error:.3e} tol={self.tolerance:.1e}")


def _rel(err: float, scale: float) -> float:
    return err / scale if scale > 0 else err


def equality(name: str, tag: str, lhs: float, rhs: float, tol: float,
             error: float | None = None) -> CheckRecord:
    """Scalar identity; by default the error is ``|lhs - rhs| / |rhs|``."""
    if error is None:
        error = _rel(abs(lhs - rhs), abs(rhs))
    return CheckRecord(name, tag, float(lhs), float(rhs), float(error), tol,
                       bool(error <= tol))


def _map_norm(G) -> float:
    return float(np.linalg.norm(G.data))


def field_distance(name: str, tag: str, got, want, tol: float) -> CheckRecord:
    """Relative L2 distance between two sampled objects with ``.data``."""
    diff = float(np.linalg.norm(got.data - want.data))
    ref = _map_norm(want)
    return equality(name, tag, _map_norm(got), ref, tol, _rel(diff, ref))


def from_spread(name: str, tag: str, rep: SpreadReport, slack: float) -> CheckRecord:
    return CheckRecord(name, tag, rep.lhs, rep.bound, _rel(rep.margin, rep.bound), slack,
                       rep.satisfied, ">=")


def check_parseval(f: QField2D, P: LCTPair, wgrid: Grid2D | None = None,
                   tol: float = 1e-6, label: str = "") -> CheckRecord:
    F = qlct_forward(f, P, wgrid)
    return equality(f"qlct parseval {label}".strip(), "qlct-parseval",
                    l2_norm(F) ** 2, l2_norm(f) ** 2, tol)


def check_qlct_inversion(f: QField2D, P: LCTPair, wgrid: Grid2D | None = None,
                         tol: float = 1e-5, label: str = "") -> CheckRecord:
    back = qlct_inverse(qlct_forward(f, P, wgrid), P, f.grid)
    return field_distance(f"qlct inversion {label}".strip(), "qlct-inversion", back, f, tol)


def check_boundedness(f: QField2D, phi: QField2D, P: LCTPair, wgrid: Grid2D | None = None,
                      ugrid: Grid2D | None = None, G: QWLCTMap | None = None,
                      slack: float = 1e-9, label: str = "") -> CheckRecord:
    if G is None:
        G = qwlct_forward(f, phi, P, wgrid, ugrid)
    peak = float(G.abs().max())
    bound = boundedness_bound(f, phi, P)
    return CheckRecord(f"qwlct boundedness {label}".strip(), "qwlct-boundedness", peak, bound,
                       _rel(bound - peak, bound), slack, bool(peak <= bound + slack), "<=")


def shift_aligned_wgrid(xgrid: Grid2D, P: LCTPair, r) -> Grid2D:
    """Frequency lattice on which ``a_k r_k`` is a whole number of steps.

    The spacing is the largest divisor of ``|a_k r_k|`` not exceeding the
    unitary default, and the count fills one period ``2 pi |b_k| / dx_k`` of
    the sampled kernel without wrapping.
    """
    r = (float(r[0]), float(r[1])) if np.ndim(r) else (float(r), float(r))
    dw, count = [], []
    for p, rk, h, m in zip((P.A1, P.A2), r, xgrid.dx, xgrid.n):
        period = 2 * math.pi * abs(p.b) / h
        d0 = period / m
        t = abs(p.a * rk)
        d = d0 if t < 1e-12 else t / math.ceil(t / d0 - 1e-9)
        dw.append(d)
        count.append(int(math.floor(period / d + 1e-9)))
    return Grid2D.symmetric(tuple(dw), tuple(count))


def check_shift(f: QField2D, phi: QField2D, P: LCTPair, r, wgrid: Grid2D, ugrid: Grid2D,
                tol: float = 1e-6, label: str = "", G: QWLCTMap | None = None) -> CheckRecord:
    if G is None:
        G = qwlct_forward(f, phi, P, wgrid, ugrid)
    direct = qwlct_forward(shift_field(f, r), phi, P, wgrid, ugrid)
    return field_distance(f"qwlct shift {label}".strip(), "qwlct-shift",
                          direct, predicted_shift_image(G, P, r), tol)


def modulation_on_lattice(P: LCTPair, wgrid: Grid2D, steps=(2, -1)) -> tuple[float, float]:
    """Modulation frequencies ``s_k`` moving the spectrum by ``steps`` w-cells."""
    return tuple(k * h / p.b for k, h, p in zip(steps, wgrid.dx, (P.A1, P.A2)))


def check_modulation(f: QField2D, phi: QField2D, P: LCTPair, s, wgrid: Grid2D, ugrid: Grid2D,
                     tol: float = 1e-6, label: str = "", G: QWLCTMap | None = None) -> CheckRecord:
    if G is None:
        G = qwlct_forward(f, phi, P, wgrid, ugrid)
    direct = qwlct_forward(modulate_field(f, s), phi, P, wgrid, ugrid)
    return field_distance(f"qwlct modulation {label}".strip(), "qwlct-modulation",
                          direct, predicted_modulation_image(G, P, s), tol)


def check_parity(f: QField2D, phi: QField2D, P: LCTPair, wgrid: Grid2D, ugrid: Grid2D,
                 tol: float = 1e-10, label: str = "") -> CheckRecord:
    lhs, rhs = parity_check(f, phi, P, wgrid, ugrid)
    err = float(np.max(np.abs(lhs.data - rhs.data)))
    return equality(f"qwlct parity {label}".strip(), "qwlct-parity",
                    _map_norm(lhs), _map_norm(rhs), tol, err)


def check_energy(f: QField2D, phi: QField2D, P: LCTPair, wgrid: Grid2D | None = None,
                 ugrid: Grid2D | None = None, reference: float | None = None,
                 tol: float = 2e-4, label: str = "", G: QWLCTMap | None = None) -> CheckRecord:
    """Map energy against ``||f||^2 ||phi||^2`` (sampled norms unless a
    continuum ``reference`` is given)."""
    if G is None:
        G = qwlct_forward(f, phi, P, wgrid, ugrid)
    if reference is None:
        reference = l2_norm(f) ** 2 * l2_norm(phi) ** 2
    return equality(f"qwlct energy {label}".strip(), "qwlct-energy", map_energy(G), reference, tol)


def check_orthogonality(f: QField2D, g: QField2D, phi: QField2D, psi: QField2D, P: LCTPair,
                        wgrid: Grid2D | None = None, ugrid: Grid2D | None = None,
                        tol: float = 2e-4, label: str = "") -> CheckRecord:
    lhs, rhs = orthogonality_check(f, g, phi, psi, P, wgrid, ugrid)
    return equality(f"qwlct orthogonality {label}".strip(), "qwlct-orthogonality", lhs, rhs, tol)


def check_qwlct_inversion(f: QField2D, phi: QField2D, P: LCTPair, wgrid: Grid2D | None = None,
                          ugrid: Grid2D | None = None, tol: float = 1e-4, label: str = "",
                          G: QWLCTMap | None = None) -> CheckRecord:
    if G is None:
        G = qwlct_forward(f, phi, P, wgrid, ugrid)
    back = qwlct_inverse(G, phi, P, f.grid)
    return field_distance(f"qwlct inversion {label}".strip(), "qwlct-inversion", back, f, tol)


def check_qlct_uncertainty(f: QField2D, P: LCTPair, k: int, wgrid: Grid2D | None = None,
                           label: str = "") -> CheckRecord:
    rep = qlct_uncertainty_check(f, P, wgrid, k)
    return from_spread(f"qlct uncertainty k={k} {label}".strip(), "qlct-uncertainty", rep, QLCT_SLACK)


def check_qwlct_uncertainty(f: QField2D, phi: QField2D, P: LCTPair, k: int,
                            wgrid: Grid2D | None = None, ugrid: Grid2D | None = None,
                            G: QWLCTMap | None = None, label: str = "") -> CheckRecord:
    rep = qwlct_uncertainty_check(f, phi, P, wgrid, ugrid, k, G=G)
    return from_spread(f"qwlct uncertainty k={k} {label}".strip(), "qwlct-uncertainty", rep,
                       QWLCT_SLACK)


def check_spatial_identity(f: QField2D, phi: QField2D, P: LCTPair, G: QWLCTMap, ks=(1, 2),
                           tol: float = 1e-4, label: str = "") -> list[CheckRecord]:
    """One record per axis in ``ks``."""
    return [equality(f"windowed spatial moment k={k} {label}".strip(), "windowed-spatial-moment",
                     lhs, rhs, tol)
            for k, (lhs, rhs) in zip(ks, windowed_spatial_identities(f, phi, G, P, ks))]


def check_oracle(P: LCTPair, alpha, w, u, tol: float = 1e-6, label: str = "") -> CheckRecord:
    exact = analytic_qwlct_gaussian_haar(P, alpha, w, u)
    quad, _ = quadrature_qwlct_gaussian_haar(P, alpha, w, u)
    diff = (exact - quad).norm()
    return equality(f"closed form vs quadrature {label}".strip(), "gaussian-haar-closed-form",
                    exact.norm(), quad.norm(), tol, diff / (1.0 + quad.norm()))


def gaussian_field(grid: Grid2D, centre=(0.0, 0.0), sigma: float = 1.0) -> QField2D:
    c1, c2 = centre
    return QField2D.from_function(
        grid, lambda x1, x2: np.exp(-((x1 - c1) ** 2 + (x2 - c2) ** 2) / (2 * sigma * sigma)))


def random_field(grid: Grid2D, rng: np.random.Generator) -> QField2D:
    return QField2D(grid, rng.standard_normal(grid.n + (4,)))


@dataclass(frozen=True)
class Tolerances:
    """Equality tolerances of the battery checks."""

    parseval: float = 1e-6
    qlct_inversion: float = 1e-5
    energy: float = 2e-4
    qwlct_inversion: float = 1e-4
    spatial_moment: float = 1e-4
    shift: float = 1e-6
    modulation: float = 1e-6
    parity: float = 1e-10
    orthogonality: float = 2e-4
    oracle: float = 1e-6

    @classmethod
    def uniform(cls, tol: float) -> Tolerances:
        return cls(*([tol] * len(fields(cls))))


@dataclass(frozen=True)
class BatteryConfig:
    """Inputs of :func:`synthetic_battery`.

    The defaults keep the run to a few seconds while leaving every check well
    inside its tolerance: the signal and window decay to roundoff inside the
    grid, and the shift ``r`` is a multiple of the u-lattice spacing.
    """

    half_width: float = 6.0
    n: int = 48
    signal_centre: tuple[float, float] = (0.25, -0.25)
    signal_sigma: float = 0.6
    window_sigma: float = 0.8
    partner_centre: tuple[float, float] = (-0.5, 0.5)
    partner_sigma: float = 0.7
    u_stride: int = 2
    shift: tuple[float, float] = (1.0, -1.0)
    modulation_steps: tuple[int, int] = (2, -1)
    parity_n: int = 8
    oracle_alpha: tuple[float, float] = (1.0, 1.0)
    oracle_w: tuple[float, float] = (0.5, -0.5)
    oracle_u: tuple[float, float] = (0.0, 0.25)
    seed: int = DEFAULT_SEED
    tolerances: Tolerances = field(default_factory=Tolerances)

    @property
    def grid(self) -> Grid2D:
        return Grid2D.centered(self.half_width, self.n)


def synthetic_battery(seed: int | None = None, tol: float | None = None,
                      config: BatteryConfig | None = None) -> list[CheckRecord]:
    """Fast default battery: every theorem on small grids.

    ``seed`` and ``tol`` override the config; ``tol`` replaces every equality
    tolerance, inequality slacks are fixed.
    """
    cfg = config or BatteryConfig()
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    if tol is not None:
        cfg = replace(cfg, tolerances=Tolerances.uniform(tol))
    t = cfg.tolerances
    rng = np.random.default_rng(cfg.seed)
    recs: list[CheckRecord] = []
    xg = cfg.grid
    f = gaussian_field(xg, cfg.signal_centre, cfg.signal_sigma)
    phi = gaussian_field(xg, sigma=cfg.window_sigma)
    ug = default_ugrid(xg, cfg.u_stride)
    maps = {}
    for P, name in ((FOURIER_LIKE, "fourier"), (CHIRPY, "chirpy")):
        recs.append(check_parseval(f, P, tol=t.parseval, label=name))
        recs.append(check_qlct_inversion(f, P, tol=t.qlct_inversion, label=name))
        G = maps[name] = qwlct_forward(f, phi, P, default_wgrid(xg, P), ug)
        recs.append(check_boundedness(f, phi, P, G=G, label=name))
        recs.append(check_energy(f, phi, P, G=G, tol=t.energy, label=name))
        recs.append(check_qwlct_inversion(f, phi, P, G=G, tol=t.qwlct_inversion, label=name))
        for k in (1, 2):
            recs.append(check_qlct_uncertainty(f, P, k, label=name))
            recs.append(check_qwlct_uncertainty(f, phi, P, k, G=G, label=name))
        recs += check_spatial_identity(f, phi, P, G, tol=t.spatial_moment, label=name)
    P = FOURIER_LIKE
    wg, G = default_wgrid(xg, P), maps["fourier"]
    recs.append(check_shift(f, phi, P, cfg.shift, wg, ug, tol=t.shift, label="fourier", G=G))
    recs.append(check_modulation(f, phi, P, modulation_on_lattice(P, wg, cfg.modulation_steps),
                                 wg, ug, tol=t.modulation, label="fourier", G=G))
    sg = Grid2D.symmetric(1.0, cfg.parity_n)
    recs.append(check_parity(random_field(sg, rng), random_field(sg, rng), CHIRPY,
                             default_wgrid(sg, CHIRPY), default_ugrid(sg), tol=t.parity,
                             label=f"random {cfg.parity_n}x{cfg.parity_n}"))
    g = gaussian_field(xg, cfg.partner_centre, cfg.partner_sigma)
    recs.append(check_orthogonality(f, g, phi, phi, CHIRPY, default_wgrid(xg, CHIRPY), ug,
                                    tol=t.orthogonality, label="shared window"))
    recs.append(check_oracle(FOURIER_LIKE, cfg.oracle_alpha, cfg.oracle_w, cfg.oracle_u,
                             tol=t.oracle, label="fourier"))
    return recs


def field_battery(f: QField2D, P: LCTPair, tol: float | None = None) -> list[CheckRecord]:
    """Checks on a given field with a Gaussian window centred on its grid."""
    t = Tolerances() if tol is None else Tolerances.uniform(tol)
    g = f.grid
    centre = tuple(x0 + (m - 1) * h / 2 for x0, h, m in zip(g.x0, g.dx, g.n))
    sigma = min(h * m for h, m in zip(g.dx, g.n)) / 16
    phi = gaussian_field(g, centre, sigma)
    stride = max(1, math.ceil(max(g.n) / 32))
    wg, ug = default_wgrid(g, P), default_ugrid(g, stride)
    G = qwlct_forward(f, phi, P, wg, ug)
    recs = [
        check_parseval(f, P, wg, tol=t.parseval),
        check_qlct_inversion(f, P, wg, tol=t.qlct_inversion),
        check_boundedness(f, phi, P, G=G),
        check_energy(f, phi, P, G=G, tol=t.energy),
        check_qwlct_inversion(f, phi, P, G=G, tol=t.qwlct_inversion),
    ]
    r = tuple(stride * h for h in g.dx)
    sw = shift_aligned_wgrid(g, P, r)
    recs.append(check_shift(f, phi, P, r, sw, ug, tol=t.shift))
    recs.append(check_modulation(f, phi, P, modulation_on_lattice(P, wg, (1, 1)), wg, ug,
                                 tol=t.modulation, G=G))
    for k in (1, 2):
        recs.append(check_qlct_uncertainty(f, P, k, wg))
        recs.append(check_qwlct_uncertainty(f, phi, P, k, G=G))
    return recs


def render(records: list[CheckRecord], seed: int | None = None) -> str:
    lines = [] if seed is None else [f"seed: {seed}"]
    lines += [r.render() for r in records]
    failed = sum(not r.passed for r in records)
    lines.append(f"{len(records) - failed}/{len(records)} checks passed")
    return "\n".join(lines)
