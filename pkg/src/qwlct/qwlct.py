"""The windowed transform (QWLCT) and the covariance identities it obeys.

For a window position ``u`` the map slice is the QLCT of the windowed product
``f(x) conj(phi(x - u))``.  The kernel tables do not depend on ``u``, so they
are built once and every slice is one batched sandwich contraction.  Window
positions must be whole multiples of the signal spacing, which keeps
``phi(x - u)`` an exact re-indexing of the sampled window.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import (AsymmetricGrid, GridMismatch, MapTooLarge, NonFiniteSample,
                     NonGridModulation, NonGridShift, NonGridU, ZeroWindow)
from .field import (Grid2D, QField2D, _pair, inner_product, l2_norm, lattice_offset,
                    parity_field, require_same_grid, tree_sum)
from .lct import LCTPair
from .qlct import (QLCTSpectrum, default_wgrid, forward_tables, inverse_tables,
                   qlct_forward, sandwich)
from .quaternion import Quaternion, qabs2, qconj, qmul

CHUNK = 32
# dense maps above this size are refused up front rather than left to the allocator
MAX_MAP_BYTES = 2 ** 31


class QWLCTMap:
    """Dense map ``data[iw1, iw2, iu1, iu2, :]`` over a w-lattice and a u-lattice."""

    __slots__ = ("wgrid", "ugrid", "data")

    def __init__(self, wgrid: Grid2D, ugrid: Grid2D, data, copy: bool = True):
        arr = np.array(data, dtype=float) if copy else np.asarray(data, dtype=float)
        shape = wgrid.n + ugrid.n + (4,)
        if arr.shape != shape:
            if arr.size != math.prod(shape):
                raise GridMismatch(f"map data of shape {arr.shape} does not fit {shape}")
            arr = arr.reshape(shape)
        if not np.all(np.isfinite(arr)):
            raise NonFiniteSample("map contains NaN or Inf samples")
        arr.flags.writeable = False
        self.wgrid = wgrid
        self.ugrid = ugrid
        self.data = arr

    def __repr__(self) -> str:
        return f"QWLCTMap(w={self.wgrid}, u={self.ugrid})"

    def slice_at(self, iu1: int, iu2: int) -> QLCTSpectrum:
        return QLCTSpectrum(self.wgrid, self.data[:, :, iu1, iu2])

    @property
    def cell(self) -> float:
        return self.wgrid.cell * self.ugrid.cell

    def abs(self) -> np.ndarray:
        return np.sqrt(qabs2(self.data))

    def __sub__(self, other: QWLCTMap) -> QWLCTMap:
        require_same_grid(self.wgrid, other.wgrid, "maps")
        require_same_grid(self.ugrid, other.ugrid, "maps")
        return QWLCTMap(self.wgrid, self.ugrid, self.data - other.data, copy=False)


def default_ugrid(xgrid: Grid2D, stride: int = 1) -> Grid2D:
    """Symmetric window-position lattice of multiples of ``stride * dx``
    spanning the signal grid."""
    du, p = [], []
    for x0, h, m in zip(xgrid.x0, xgrid.dx, xgrid.n):
        reach = max(abs(x0), abs(x0 + (m - 1) * h))
        k = int(math.floor(reach / (stride * h) + 1e-9))
        du.append(stride * h)
        p.append(2 * max(k, 1) + 1)
    return Grid2D.symmetric(tuple(du), tuple(p))


def window_offsets(xgrid: Grid2D, ugrid: Grid2D) -> tuple[np.ndarray, np.ndarray]:
    """Sample offsets ``u / dx`` for every lattice position, per axis."""
    out = []
    for k in (1, 2):
        h = xgrid.dx[k - 1]
        out.append(np.array([lattice_offset(u, h, NonGridU, "window position")
                             for u in ugrid.axis(k)], dtype=int))
    return out[0], out[1]


class _Shifter:
    """Yields ``a(x - u)`` for the sampled array ``a`` at integer offsets."""

    def __init__(self, a: np.ndarray):
        n1, n2 = a.shape[:2]
        self.n = (n1, n2)
        self.pad = np.zeros((3 * n1, 3 * n2) + a.shape[2:])
        self.pad[n1:2 * n1, n2:2 * n2] = a

    def __call__(self, s1: int, s2: int) -> np.ndarray:
        n1, n2 = self.n
        s1 = int(np.clip(s1, -n1, n1))
        s2 = int(np.clip(s2, -n2, n2))
        return self.pad[n1 - s1:2 * n1 - s1, n2 - s2:2 * n2 - s2]


def _positions(ugrid: Grid2D, off1, off2):
    return [(i1, i2, off1[i1], off2[i2]) for i1 in range(ugrid.n[0]) for i2 in range(ugrid.n[1])]


def _run_chunks(fn, items, workers: int):
    chunks = [items[i:i + CHUNK] for i in range(0, len(items), CHUNK)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, chunks))
    return [fn(c) for c in chunks]


def _check_window(phi: QField2D) -> float:
    norm = l2_norm(phi)
    if norm == 0.0:
        raise ZeroWindow("window must not vanish identically")
    return norm


def qwlct_forward(f: QField2D, phi: QField2D, P: LCTPair, wgrid: Grid2D | None = None,
                  ugrid: Grid2D | None = None, workers: int = 1,
                  max_bytes: int = MAX_MAP_BYTES) -> QWLCTMap:
    """Windowed transform on the full ``w x u`` lattice.

    ``workers`` splits window positions across threads in fixed chunks; the
    map is bitwise identical for every worker count.  Maps larger than
    ``max_bytes`` raise :class:`MapTooLarge`.
    """
    require_same_grid(f.grid, phi.grid, "signal and window")
    _check_window(phi)
    wgrid = wgrid or default_wgrid(f.grid, P)
    ugrid = ugrid or default_ugrid(f.grid)
    size = 32 * math.prod(wgrid.n + ugrid.n)
    if size > max_bytes:
        raise MapTooLarge(f"map over w {wgrid.n} x u {ugrid.n} needs {size / 2 ** 30:.1f} GiB "
                          f"(limit {max_bytes / 2 ** 30:.1f} GiB); use coarser w or u lattices")
    off1, off2 = window_offsets(f.grid, ugrid)
    left, right = forward_tables(P, f.grid, wgrid)
    shifted = _Shifter(qconj(phi.data))
    out = np.empty(wgrid.n + ugrid.n + (4,))

    def work(chunk):
        h = np.stack([qmul(f.data, shifted(s1, s2)) for _, _, s1, s2 in chunk])
        res = sandwich(left, h, right, f.grid.cell)
        for (i1, i2, _, _), r in zip(chunk, res):
            out[:, :, i1, i2] = r

    _run_chunks(work, _positions(ugrid, off1, off2), workers)
    return QWLCTMap(wgrid, ugrid, out, copy=False)


def windowed_product(f: QField2D, phi: QField2D, u) -> QField2D:
    """``f(x) conj(phi(x - u))`` on the signal grid."""
    require_same_grid(f.grid, phi.grid, "signal and window")
    u1, u2 = _pair(u)
    s1 = lattice_offset(u1, f.grid.dx[0], NonGridU, "window position")
    s2 = lattice_offset(u2, f.grid.dx[1], NonGridU, "window position")
    return QField2D(f.grid, qmul(f.data, _Shifter(qconj(phi.data))(s1, s2)))


def qwlct_fixed_u(f: QField2D, phi: QField2D, P: LCTPair, wgrid: Grid2D | None, u) -> QLCTSpectrum:
    """One map slice, computed as the QLCT of the windowed product."""
    _check_window(phi)
    return qlct_forward(windowed_product(f, phi, u), P, wgrid)


def qwlct_inverse(G: QWLCTMap, phi: QField2D, P: LCTPair, xgrid: Grid2D | None = None,
                  workers: int = 1) -> QField2D:
    """Reconstruct the signal from its map.

    Sums ``conj(K_i) G conj(K_j) phi(x - u)`` over both lattices and divides
    by ``||phi||^2``.  ``xgrid`` defaults to (and must equal) the window grid.
    """
    xgrid = xgrid or phi.grid
    require_same_grid(xgrid, phi.grid, "output grid and window")
    norm = _check_window(phi)
    off1, off2 = window_offsets(xgrid, G.ugrid)
    left, right = inverse_tables(P, xgrid, G.wgrid)
    shifted = _Shifter(phi.data)

    def work(chunk):
        g = np.stack([G.data[:, :, i1, i2] for i1, i2, _, _ in chunk])
        local = sandwich(left, g, right, G.wgrid.cell)
        acc = np.zeros(xgrid.n + (4,))
        for (_, _, s1, s2), y in zip(chunk, local):
            acc += qmul(y, shifted(s1, s2))
        return acc

    parts = _run_chunks(work, _positions(G.ugrid, off1, off2), workers)
    total = tree_sum(np.stack(parts))
    return QField2D(xgrid, total * (G.ugrid.cell / norm**2))


def _shift_nd(a: np.ndarray, shifts) -> np.ndarray:
    """``out[i] = a[i - s]`` over the leading axes, zero-filled."""
    out = np.zeros_like(a)
    dst, src = [], []
    for s, m in zip(shifts, a.shape):
        if abs(s) >= m:
            return out
        dst.append(slice(max(s, 0), m + min(s, 0)))
        src.append(slice(max(-s, 0), m - max(s, 0)))
    out[tuple(dst)] = a[tuple(src)]
    return out


def _phase_array(theta: np.ndarray, comp: int) -> np.ndarray:
    q = np.zeros(theta.shape + (4,))
    q[..., 0] = np.cos(theta)
    q[..., comp] = np.sin(theta)
    return q


def _dress(G: QWLCTMap, data: np.ndarray, th1: np.ndarray, th2: np.ndarray) -> QWLCTMap:
    left = _phase_array(th1, 1)[:, None, None, None, :]
    right = _phase_array(th2, 2)[None, :, None, None, :]
    return QWLCTMap(G.wgrid, G.ugrid, qmul(qmul(left, data), right), copy=False)


def predicted_shift_image(G_of_f: QWLCTMap, P: LCTPair, r) -> QWLCTMap:
    """Map of ``f(x - r)`` predicted from the map of ``f``.

    Samples the original map at ``(w - a r, u - r)`` and dresses it with
    ``exp(i c1 r1 (w1 - a1 r1 / 2))`` on the left and the j-analogue on the
    right.  Lattice points whose source falls outside the map are zero.
    """
    r = _pair(r)
    G = G_of_f
    params = (P.A1, P.A2)
    tw = [lattice_offset(p.a * rk, h, NonGridShift, "frequency shift a*r")
          for p, rk, h in zip(params, r, G.wgrid.dx)]
    tu = [lattice_offset(rk, h, NonGridShift, "shift") for rk, h in zip(r, G.ugrid.dx)]
    data = _shift_nd(G.data, tw + tu)
    th = [p.c * rk * G.wgrid.axis(k) - p.a * p.c * rk * rk / 2
          for k, p, rk in zip((1, 2), params, r)]
    return _dress(G, data, th[0], th[1])


def predicted_modulation_image(G_of_f: QWLCTMap, P: LCTPair, s) -> QWLCTMap:
    """Map of ``exp(i x1 s1) f exp(j x2 s2)`` predicted from the map of ``f``:
    the original sampled at ``w - s b`` and dressed with
    ``exp(i d1 s1 (w1 - b1 s1 / 2))`` and its j-analogue."""
    s = _pair(s)
    G = G_of_f
    params = (P.A1, P.A2)
    tw = [lattice_offset(sk * p.b, h, NonGridModulation, "frequency shift s*b")
          for p, sk, h in zip(params, s, G.wgrid.dx)]
    data = _shift_nd(G.data, tw + [0, 0])
    th = [p.d * sk * G.wgrid.axis(k) - p.b * p.d * sk * sk / 2
          for k, p, sk in zip((1, 2), params, s)]
    return _dress(G, data, th[0], th[1])


def reversed_map(G: QWLCTMap) -> QWLCTMap:
    """``G(-w, -u)`` on symmetric lattices."""
    for grid in (G.wgrid, G.ugrid):
        if not grid.is_symmetric():
            raise AsymmetricGrid(f"reversal needs lattices symmetric about 0, got {grid}")
    return QWLCTMap(G.wgrid, G.ugrid, G.data[::-1, ::-1, ::-1, ::-1])


def parity_check(f: QField2D, phi: QField2D, P: LCTPair, wgrid: Grid2D,
                 ugrid: Grid2D) -> tuple[QWLCTMap, QWLCTMap]:
    """``(map of P f under window P phi, map of f under phi at (-w, -u))``."""
    for grid in (f.grid, wgrid, ugrid):
        if not grid.is_symmetric():
            raise AsymmetricGrid(f"parity needs lattices symmetric about 0, got {grid}")
    lhs = qwlct_forward(parity_field(f), parity_field(phi), P, wgrid, ugrid)
    rhs = reversed_map(qwlct_forward(f, phi, P, wgrid, ugrid))
    return lhs, rhs


def map_inner_product(G1: QWLCTMap, G2: QWLCTMap) -> Quaternion:
    """Quadrature of ``sum G1 conj(G2) dw du`` over the 4D lattice."""
    require_same_grid(G1.wgrid, G2.wgrid, "maps")
    require_same_grid(G1.ugrid, G2.ugrid, "maps")
    terms = qmul(G1.data, qconj(G2.data)).reshape(-1, 4)
    return Quaternion.from_array(tree_sum(terms) * G1.cell)


def map_scalar_inner(G1: QWLCTMap, G2: QWLCTMap) -> float:
    require_same_grid(G1.wgrid, G2.wgrid, "maps")
    require_same_grid(G1.ugrid, G2.ugrid, "maps")
    terms = np.einsum("...c,...c->...", G1.data, G2.data).reshape(-1)
    return float(tree_sum(terms)) * G1.cell


def map_energy(G: QWLCTMap) -> float:
    return float(tree_sum(qabs2(G.data).reshape(-1))) * G.cell


def orthogonality_check(f: QField2D, g: QField2D, phi: QField2D, psi: QField2D, P: LCTPair,
                        wgrid: Grid2D | None = None, ugrid: Grid2D | None = None) -> tuple[float, float]:
    """Both sides of the orthogonality relation.

    ``lhs`` is the scalar 4D inner product of the two maps.  ``rhs`` is
    ``[(integral conj(g) f) (integral conj(phi) psi)]_0``, the order in which
    the quaternion factors actually come out of the derivation; it reduces to
    ``||phi||^2 <f, g>`` for ``phi == psi`` and ``||f||^2 <phi, psi>`` for
    ``f == g``.
    """
    wgrid = wgrid or default_wgrid(f.grid, P)
    ugrid = ugrid or default_ugrid(f.grid)
    Gf = qwlct_forward(f, phi, P, wgrid, ugrid)
    Gg = qwlct_forward(g, psi, P, wgrid, ugrid)
    lhs = map_scalar_inner(Gf, Gg)
    sig = inner_product(g.conj(), f.conj())
    win = inner_product(phi.conj(), psi.conj())
    return lhs, (sig * win).s


def boundedness_bound(f: QField2D, phi: QField2D, P: LCTPair) -> float:
    return l2_norm(f) * l2_norm(phi) / (2 * math.pi * math.sqrt(abs(P.A1.b * P.A2.b)))
