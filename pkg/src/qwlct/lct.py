"""Per-axis LCT matrix parameters."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateB, DetNotOne

DET_TOL = 1e-12
B_TOL = 1e-12


@dataclass(frozen=True)
class LCTParams:
    """Unimodular matrix ``[[a, b], [c, d]]`` with ``b != 0``.

    Build through :func:`validate` (or ``LCTParams.of``) so the invariants are
    checked; the raw constructor does not re-check them.
    """

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def of(cls, a, b, c, d) -> LCTParams:
        return validate(a, b, c, d)

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def matrix(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return ((self.a, self.b), (self.c, self.d))

    def inverse(self) -> LCTParams:
        return inverse_params(self)

    def __str__(self) -> str:
        return f"{self.a!r},{self.b!r},{self.c!r},{self.d!r}"


@dataclass(frozen=True)
class LCTPair:
    A1: LCTParams
    A2: LCTParams

    def inverse(self) -> LCTPair:
        return LCTPair(inverse_params(self.A1), inverse_params(self.A2))

    def b(self, k: int) -> float:
        return (self.A1 if k == 1 else self.A2).b


def validate(a, b, c, d) -> LCTParams:
    vals = [float(v) for v in (a, b, c, d)]
    if not all(math.isfinite(v) for v in vals):
        raise DetNotOne(f"non-finite LCT entry in {vals}")
    a, b, c, d = vals
    det = a * d - b * c
    if abs(det - 1.0) > DET_TOL:
        raise DetNotOne(f"ad - bc = {det!r}, expected 1 (tolerance {DET_TOL})")
    if abs(b) <= B_TOL:
        raise DegenerateB(
            f"|b| = {abs(b)!r} <= {B_TOL}: the b = 0 (chirp multiplication) "
            "kernel is not supported")
    return LCTParams(a, b, c, d)


def inverse_params(p: LCTParams) -> LCTParams:
    return validate(p.d, -p.b, -p.c, p.a)


def parse_params(text: str) -> LCTParams:
    """Parse the ``a,b,c,d`` flag syntax.

    Malformed text raises ``ValueError`` (a usage problem); well-formed but
    invalid matrices raise the validation errors of :func:`validate`.
    """
    parts = text.split(",")
    if len(parts) != 4 or any(p != p.strip() or not p for p in parts):
        raise ValueError(f"expected 'a,b,c,d' (four comma-separated numbers, no spaces), got {text!r}")
    return validate(*(float(p) for p in parts))


FOURIER = LCTParams(0.0, 1.0, -1.0, 0.0)
