"""Closed-form windowed transform of a separable Gaussian under the Haar window.

With ``f = exp(-(alpha1 x1^2 + alpha2 x2^2))`` and the 2D Haar window the
transform factors into an i-plane integral along axis 1 times a j-plane
integral along axis 2, and each piece is an error-function difference after
completing the square.  Per axis, with ``S = 2 b alpha - i a``:

    A = sqrt(S / (2 b)),   B = i w / (2 b A)
    J = exp(B^2 + i d w^2 / (2 b) - i pi / 4)
    int_lo^hi K(x, w) exp(-alpha x^2) dx = J / (2 A sqrt(2 b)) (erf(A hi + B) - erf(A lo + B))

:func:`quadrature_qwlct_gaussian_haar` evaluates the same quantity with the
transform engine plus Romberg extrapolation, as an independent check.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DegenerateB, DomainTooLarge, NonPositiveAlpha
from .field import Grid2D, QField2D, _pair
from .kernel import kernel_table
from .lct import LCTPair, LCTParams
from .qlct import sandwich
from .quaternion import Quaternion, iplane, jplane, mul

ERF_DOMAIN = 12.0
SERIES_RADIUS = 3.0
# Beyond the series radius the Maclaurin terms cancel badly only when |Re z|
# is large; near the imaginary axis they do not cancel at all and the
# continued fraction converges slowly, so the series is kept there.
SERIES_STRIP = 1.5
TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


@dataclass(frozen=True)
class ComplexInPlane:
    """A quaternion confined to span{1, i} or span{1, j}."""

    re: float
    im: float
    plane: Literal["i", "j"] = "i"

    def __post_init__(self):
        if self.plane not in ("i", "j"):
            raise ValueError(f"plane must be 'i' or 'j', got {self.plane!r}")

    @classmethod
    def of(cls, z: complex, plane: str = "i") -> ComplexInPlane:
        z = complex(z)
        return cls(z.real, z.imag, plane)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __mul__(self, other: ComplexInPlane) -> ComplexInPlane:
        if other.plane != self.plane:
            raise ValueError("cannot multiply values from different planes as complex numbers")
        return ComplexInPlane.of(complex(self) * complex(other), self.plane)

    def conj(self) -> ComplexInPlane:
        return ComplexInPlane(self.re, -self.im, self.plane)

    def to_quaternion(self) -> Quaternion:
        return iplane(complex(self)) if self.plane == "i" else jplane(complex(self))


def _kahan_add(total: complex, comp: complex, term: complex) -> tuple[complex, complex]:
    y = term - comp
    t = total + y
    return t, (t - total) - y


def _erf_series(z: complex) -> complex:
    z2 = z * z
    power = z          # z^(2n+1) (-1)^n / n!
    total, comp = 0j, 0j
    n = 0
    while True:
        term = power / (2 * n + 1)
        total, comp = _kahan_add(total, comp, term)
        if abs(term) <= 1e-17 * abs(total) and n > 2:
            break
        n += 1
        power *= -z2 / n
        if n > 2000:
            raise RuntimeError(f"erf series did not converge at z={z}")
    return TWO_OVER_SQRT_PI * total


def _erfc_continued_fraction(z: complex) -> complex:
    """``erfc(z)`` for ``Re z > 0`` from the Laplace continued fraction
    ``1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))``, evaluated with the
    modified Lentz method."""
    tiny = 1e-300
    f = z
    C = z
    D = 0j
    for m in range(1, 5000):
        a = m / 2.0
        D = z + a * D
        D = 1.0 / (D if D != 0 else tiny)
        C = z + a / (C if C != 0 else tiny)
        delta = C * D
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    else:
        raise RuntimeError(f"erfc continued fraction did not converge at z={z}")
    return cmath.exp(-z * z) / (math.sqrt(math.pi) * f)


def erf_complex_value(z: complex) -> complex:
    """Entire error function at a complex argument, ``|z| <= 12``."""
    z = complex(z)
    r = abs(z)
    if r > ERF_DOMAIN:
        raise DomainTooLarge(f"|z| = {r:.6g} exceeds the supported radius {ERF_DOMAIN}")
    if r <= SERIES_RADIUS or abs(z.real) < SERIES_STRIP:
        return _erf_series(z)
    if z.real < 0:
        return -(1.0 - _erfc_continued_fraction(-z))
    return 1.0 - _erfc_continued_fraction(z)


def erf_complex(z):
    """``erf`` evaluated inside the plane of ``z``.

    Accepts a :class:`ComplexInPlane` (result in the same plane) or a plain
    complex number.
    """
    if isinstance(z, ComplexInPlane):
        return ComplexInPlane.of(erf_complex_value(complex(z)), z.plane)
    return erf_complex_value(z)


def haar(x1, x2):
    """Two-dimensional Haar window: +1 on [0, 1/2)^2, -1 on [1/2, 1)^2, else 0."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    lower = (x1 >= 0) & (x1 < 0.5) & (x2 >= 0) & (x2 < 0.5)
    upper = (x1 >= 0.5) & (x1 < 1) & (x2 >= 0.5) & (x2 < 1)
    return lower.astype(float) - upper.astype(float)


def haar_window(grid: Grid2D) -> QField2D:
    return QField2D.from_function(grid, haar)


def gaussian(x1, x2, alpha):
    a1, a2 = _pair(alpha)
    if a1 <= 0 or a2 <= 0:
        raise NonPositiveAlpha(f"Gaussian widths must be positive, got {(a1, a2)}")
    return np.exp(-(a1 * np.asarray(x1) ** 2 + a2 * np.asarray(x2) ** 2))


def gaussian_signal(grid: Grid2D, alpha) -> QField2D:
    return QField2D.from_function(grid, lambda x1, x2: gaussian(x1, x2, alpha))


def _check_oracle_params(P: LCTPair, alpha) -> tuple[float, float]:
    for p in (P.A1, P.A2):
        if p.b <= 0:
            raise DegenerateB(f"closed form is only implemented for b > 0, got b = {p.b}")
    a1, a2 = _pair(alpha)
    if a1 <= 0 or a2 <= 0:
        raise NonPositiveAlpha(f"Gaussian widths must be positive, got {(a1, a2)}")
    return a1, a2


def gaussian_segment(p: LCTParams, alpha: float, w: float, lo: float, hi: float) -> complex:
    """``int_lo^hi K(x, w) exp(-alpha x^2) dx`` as a complex number."""
    b = p.b
    S = complex(2 * b * alpha, -p.a)
    A = cmath.sqrt(S / (2 * b))
    B = 1j * w / (2 * b * A)
    J = cmath.exp(B * B + 1j * p.d * w * w / (2 * b) - 1j * math.pi / 4)
    scale = J / (2 * A * math.sqrt(2 * b))
    return scale * (erf_complex_value(A * hi + B) - erf_complex_value(A * lo + B))


def analytic_factors(P: LCTPair, alpha, w, u) -> tuple[tuple[ComplexInPlane, ComplexInPlane],
                                                       tuple[ComplexInPlane, ComplexInPlane]]:
    """Per-axis factors ``((lower_1, upper_1), (lower_2, upper_2))``; lower
    covers the +1 Haar cell, upper the -1 cell."""
    a1, a2 = _check_oracle_params(P, alpha)
    w1, w2 = _pair(w)
    u1, u2 = _pair(u)
    f1 = (gaussian_segment(P.A1, a1, w1, u1, u1 + 0.5), gaussian_segment(P.A1, a1, w1, u1 + 0.5, u1 + 1))
    f2 = (gaussian_segment(P.A2, a2, w2, u2, u2 + 0.5), gaussian_segment(P.A2, a2, w2, u2 + 0.5, u2 + 1))
    return (tuple(ComplexInPlane.of(v, "i") for v in f1),
            tuple(ComplexInPlane.of(v, "j") for v in f2))


def analytic_qwlct_gaussian_haar(P: LCTPair, alpha, w, u, window_sign: float = 1.0) -> Quaternion:
    """Closed-form map value at ``(w, u)``; ``window_sign=-1`` swaps the
    signs of the two Haar cells."""
    (lo1, hi1), (lo2, hi2) = analytic_factors(P, alpha, w, u)
    value = (mul(lo1.to_quaternion(), lo2.to_quaternion())
             - mul(hi1.to_quaternion(), hi2.to_quaternion()))
    return value * window_sign


def _midpoint_value(P: LCTPair, alpha, w, u, n: int) -> np.ndarray:
    """Engine quadrature on ``n x n`` cells over the window support at ``u``."""
    u1, u2 = _pair(u)
    w1, w2 = _pair(w)
    grid = Grid2D((u1 + 0.5 / n, u2 + 0.5 / n), (1.0 / n, 1.0 / n), (n, n))
    x1, x2 = grid.mesh()
    product = gaussian(x1, x2, alpha) * haar(x1 - u1, x2 - u2)
    data = np.zeros(grid.n + (4,))
    data[..., 0] = product
    left = kernel_table(P.A1, grid.axis(1), np.array([w1]))
    right = kernel_table(P.A2, grid.axis(2), np.array([w2])).T
    return sandwich(left, data, right, grid.cell)[0, 0]


def quadrature_qwlct_gaussian_haar(P: LCTPair, alpha, w, u, n0: int = 16,
                                   levels: int = 5) -> tuple[Quaternion, float]:
    """Romberg-extrapolated midpoint quadrature of the same map value.

    Cells are aligned with the Haar discontinuities, so the midpoint error
    has an even-power expansion in the cell size.  Returns the estimate and
    the change between the last two extrapolants (self-convergence).
    """
    if n0 % 2:
        raise ValueError("n0 must be even so cells align with the Haar midline")
    _check_oracle_params(P, alpha)
    rows = []
    for k in range(levels):
        row = [_midpoint_value(P, alpha, w, u, n0 * 2 ** k)]
        for j in range(1, k + 1):
            row.append(row[j - 1] + (row[j - 1] - rows[k - 1][j - 1]) / (4 ** j - 1))
        rows.append(row)
    best = rows[-1][-1]
    change = float(np.max(np.abs(best - rows[-2][-1])))
    return Quaternion.from_array(best), change
