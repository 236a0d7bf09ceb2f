"""Naive loop implementations used as brute-force oracles on tiny grids.

Nothing here touches the complex-pair views, kernel tables or matmuls of the
fast engine: every term is a scalar ``Quaternion`` product built from the
pointwise kernel functions.
"""
from __future__ import annotations

import numpy as np

from .field import Grid2D, QField2D
from .kernel import kernel_i, kernel_i_conj, kernel_j, kernel_j_conj
from .lct import LCTPair
from .quaternion import Quaternion, conj, mul

ZERO = Quaternion(0.0, 0.0, 0.0, 0.0)


def naive_qlct(f: QField2D, P: LCTPair, wgrid: Grid2D) -> np.ndarray:
    x1s, x2s = f.grid.axis(1), f.grid.axis(2)
    w1s, w2s = wgrid.axis(1), wgrid.axis(2)
    out = np.zeros(wgrid.n + (4,))
    for l1, w1 in enumerate(w1s):
        for l2, w2 in enumerate(w2s):
            acc = ZERO
            for k1, x1 in enumerate(x1s):
                for k2, x2 in enumerate(x2s):
                    term = mul(mul(kernel_i(P.A1, x1, w1), f.at(k1, k2)), kernel_j(P.A2, x2, w2))
                    acc = acc + term
            out[l1, l2] = (acc * f.grid.cell).to_array()
    return out


def naive_qlct_inverse(F: QField2D, P: LCTPair, xgrid: Grid2D) -> np.ndarray:
    x1s, x2s = xgrid.axis(1), xgrid.axis(2)
    w1s, w2s = F.grid.axis(1), F.grid.axis(2)
    out = np.zeros(xgrid.n + (4,))
    for k1, x1 in enumerate(x1s):
        for k2, x2 in enumerate(x2s):
            acc = ZERO
            for l1, w1 in enumerate(w1s):
                for l2, w2 in enumerate(w2s):
                    term = mul(mul(kernel_i_conj(P.A1, x1, w1), F.at(l1, l2)),
                               kernel_j_conj(P.A2, x2, w2))
                    acc = acc + term
            out[k1, k2] = (acc * F.grid.cell).to_array()
    return out


def _window_value(phi: QField2D, x1: float, x2: float) -> Quaternion:
    """``phi`` at a physical point, zero off the lattice or outside it."""
    g = phi.grid
    t1 = (x1 - g.x0[0]) / g.dx[0]
    t2 = (x2 - g.x0[1]) / g.dx[1]
    i1, i2 = int(round(t1)), int(round(t2))
    if abs(t1 - i1) > 1e-9 or abs(t2 - i2) > 1e-9:
        raise ValueError("window evaluated off its lattice")
    if 0 <= i1 < g.n[0] and 0 <= i2 < g.n[1]:
        return phi.at(i1, i2)
    return ZERO


def naive_qwlct(f: QField2D, phi: QField2D, P: LCTPair, wgrid: Grid2D,
                ugrid: Grid2D) -> np.ndarray:
    """Six nested loops: ``(w1, w2, u1, u2)`` outside, ``(x1, x2)`` inside."""
    x1s, x2s = f.grid.axis(1), f.grid.axis(2)
    out = np.zeros(wgrid.n + ugrid.n + (4,))
    for l1, w1 in enumerate(wgrid.axis(1)):
        for l2, w2 in enumerate(wgrid.axis(2)):
            for m1, u1 in enumerate(ugrid.axis(1)):
                for m2, u2 in enumerate(ugrid.axis(2)):
                    acc = ZERO
                    for k1, x1 in enumerate(x1s):
                        for k2, x2 in enumerate(x2s):
                            h = mul(f.at(k1, k2), conj(_window_value(phi, x1 - u1, x2 - u2)))
                            acc = acc + mul(mul(kernel_i(P.A1, x1, w1), h), kernel_j(P.A2, x2, w2))
                    out[l1, l2, m1, m2] = (acc * f.grid.cell).to_array()
    return out
