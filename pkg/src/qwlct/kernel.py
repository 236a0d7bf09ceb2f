"""The i- and j-kernels of the two-sided QLCT.

For parameters ``(a, b, c, d)`` the kernel at ``(x, w)`` is

    exp(e * (a x^2 - 2 x w + d w^2) / (2 b) - e * sign(b) * pi / 4) / sqrt(2 pi |b|)

with ``e = i`` for the left (axis 1) kernel and ``e = j`` for the right
(axis 2) kernel.  For ``b > 0`` this is exactly ``1/sqrt(2 pi b)`` times the
usual chirp.  The ``sign(b)`` in the constant phase is the branch of
``sqrt(1 / (2 pi i b))`` and is what makes ``conj(K_A(x, w)) == K_{A^-1}(w, x)``.
"""
from __future__ import annotations

import math

import numpy as np

from .lct import LCTParams
from .quaternion import Quaternion, iplane, jplane


def _phase(p: LCTParams, x, w):
    return (p.a * x * x - 2.0 * x * w + p.d * w * w) / (2.0 * p.b) - math.copysign(math.pi / 4, p.b)


def amplitude(p: LCTParams) -> float:
    return 1.0 / math.sqrt(2.0 * math.pi * abs(p.b))


def kernel_complex(p: LCTParams, x: float, w: float) -> complex:
    """Kernel value as a plain complex number (imaginary unit unassigned)."""
    th = _phase(p, x, w)
    return amplitude(p) * complex(math.cos(th), math.sin(th))


def kernel_i(p: LCTParams, x1: float, w1: float) -> Quaternion:
    return iplane(kernel_complex(p, x1, w1))


def kernel_j(p: LCTParams, x2: float, w2: float) -> Quaternion:
    return jplane(kernel_complex(p, x2, w2))


def kernel_i_conj(p: LCTParams, x1: float, w1: float) -> Quaternion:
    return iplane(kernel_complex(p, x1, w1).conjugate())


def kernel_j_conj(p: LCTParams, x2: float, w2: float) -> Quaternion:
    return jplane(kernel_complex(p, x2, w2).conjugate())


def kernel_table(p: LCTParams, x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Complex table ``T[l, k] = K(x[k], w[l])``, shape ``(len(w), len(x))``.

    The imaginary unit stands for i or j depending on which side the table is
    applied; the engines transpose as needed.
    """
    x = np.asarray(x, dtype=float)[None, :]
    w = np.asarray(w, dtype=float)[:, None]
    return amplitude(p) * np.exp(1j * _phase(p, x, w))
