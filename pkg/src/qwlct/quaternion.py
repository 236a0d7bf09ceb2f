"""Quaternion arithmetic.

Two layers live here.  The scalar :class:`Quaternion` is a small value type
used for single samples, kernel values and the brute-force reference
transforms.  The ``q*`` array functions operate on float arrays whose last
axis holds the four components in scalar-first order ``(s, x, y, z)``; the
transform engines work on those.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Quaternion:
    """``s + x i + y j + z k``."""

    s: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __iter__(self):
        yield from (self.s, self.x, self.y, self.z)

    def __add__(self, other: Quaternion) -> Quaternion:
        return Quaternion(self.s + other.s, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    def __sub__(self, other: Quaternion) -> Quaternion:
        return Quaternion(self.s - other.s, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.s, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, other)
        return Quaternion(self.s * other, self.x * other,
                          self.y * other, self.z * other)

    def __rmul__(self, other):
        # only reached for real left operands
        return Quaternion(other * self.s, other * self.x,
                          other * self.y, other * self.z)

    def __truediv__(self, other: float) -> Quaternion:
        return Quaternion(self.s / other, self.x / other,
                          self.y / other, self.z / other)

    def conj(self) -> Quaternion:
        return conj(self)

    def norm(self) -> float:
        return norm(self)

    def to_array(self) -> np.ndarray:
        return np.array([self.s, self.x, self.y, self.z], dtype=float)

    @classmethod
    def from_array(cls, a) -> Quaternion:
        s, x, y, z = (float(v) for v in a)
        return cls(s, x, y, z)


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``."""
    return Quaternion(
        p.s * q.s - p.x * q.x - p.y * q.y - p.z * q.z,
        p.s * q.x + p.x * q.s + p.y * q.z - p.z * q.y,
        p.s * q.y - p.x * q.z + p.y * q.s + p.z * q.x,
        p.s * q.z + p.x * q.y - p.y * q.x + p.z * q.s,
    )


def conj(q: Quaternion) -> Quaternion:
    return Quaternion(q.s, -q.x, -q.y, -q.z)


def norm(q: Quaternion) -> float:
    return math.sqrt(q.s * q.s + q.x * q.x + q.y * q.y + q.z * q.z)


def scalar_part(q: Quaternion) -> float:
    return q.s


def exp_i(theta: float) -> Quaternion:
    """Unit phase ``cos(theta) + i sin(theta)``."""
    return Quaternion(math.cos(theta), math.sin(theta), 0.0, 0.0)


def exp_j(theta: float) -> Quaternion:
    """Unit phase ``cos(theta) + j sin(theta)``."""
    return Quaternion(math.cos(theta), 0.0, math.sin(theta), 0.0)


# --- array layer -----------------------------------------------------------

def qmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Elementwise Hamilton product of broadcastable ``(..., 4)`` arrays."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    ps, px, py, pz = np.moveaxis(p, -1, 0)
    qs, qx, qy, qz = np.moveaxis(q, -1, 0)
    return np.stack([
        ps * qs - px * qx - py * qy - pz * qz,
        ps * qx + px * qs + py * qz - pz * qy,
        ps * qy - px * qz + py * qs + pz * qx,
        ps * qz + px * qy - py * qx + pz * qs,
    ], axis=-1)


def qconj(q: np.ndarray) -> np.ndarray:
    out = np.array(q, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def qabs2(q: np.ndarray) -> np.ndarray:
    """Squared modulus, componentwise sum of squares."""
    q = np.asarray(q, dtype=float)
    return np.einsum("...c,...c->...", q, q)


def qabs(q: np.ndarray) -> np.ndarray:
    return np.sqrt(qabs2(q))


# A quaternion splits as (s + x i) + (y + z i) j, so left multiplication by an
# element of span{1, i} acts as ordinary complex multiplication on both
# halves.  Likewise (s + y j) + i (x + z j) turns right multiplication by an
# element of span{1, j} into complex multiplication.  The engines contract
# kernel tables against these complex pairs with plain matmuls.

def to_ipair(q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    q = np.asarray(q, dtype=float)
    return q[..., 0] + 1j * q[..., 1], q[..., 2] + 1j * q[..., 3]


def from_ipair(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.stack([a.real, a.imag, b.real, b.imag], axis=-1)


def to_jpair(q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    q = np.asarray(q, dtype=float)
    return q[..., 0] + 1j * q[..., 2], q[..., 1] + 1j * q[..., 3]


def from_jpair(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.stack([a.real, b.real, a.imag, b.imag], axis=-1)


def iplane(z: complex) -> Quaternion:
    """Embed a complex number into span{1, i}."""
    return Quaternion(z.real, z.imag, 0.0, 0.0)


def jplane(z: complex) -> Quaternion:
    """Embed a complex number into span{1, j}."""
    return Quaternion(z.real, 0.0, z.imag, 0.0)
