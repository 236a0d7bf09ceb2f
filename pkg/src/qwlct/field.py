"""Sampled quaternion fields on uniform 2D lattices.

Integrals use the composite midpoint rule: every sample carries the weight
``dx1 * dx2`` and the lattice points are read as cell centres.  All scalar
reductions go through :func:`tree_sum`, whose summation order depends only on
the number of terms, so results are bitwise reproducible for any worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (AsymmetricGrid, GridMismatch, InvalidGrid, NonFiniteSample,
                     NonGridShift)
from .quaternion import Quaternion, qabs2, qconj, qmul

ALIGN_TOL = 1e-9
LEAF = 64


def tree_sum(values, workers: int = 1) -> np.ndarray:
    """Pairwise sum over the first axis in a fixed order.

    Terms are grouped into leaves of ``LEAF`` consecutive rows, each leaf is
    summed sequentially, and leaf sums are combined level by level in
    adjacent pairs.  ``workers > 1`` evaluates leaves concurrently; the tree
    itself is unchanged, so the result is bit-identical.
    """
    v = np.asarray(values, dtype=float)
    n = v.shape[0]
    tail = v.shape[1:]
    if n == 0:
        return np.zeros(tail)
    nleaf = -(-n // LEAF)
    pad = nleaf * LEAF - n
    if pad:
        v = np.concatenate([v, np.zeros((pad,) + tail)], axis=0)
    blocks = v.reshape((nleaf, LEAF) + tail)

    def leaf_sums(lo, hi):
        acc = blocks[lo:hi, 0].copy()
        for t in range(1, LEAF):
            acc += blocks[lo:hi, t]
        return acc

    if workers > 1 and nleaf > 1:
        edges = np.linspace(0, nleaf, min(workers, nleaf) + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(leaf_sums, edges[:-1], edges[1:]))
        level = np.concatenate(parts, axis=0)
    else:
        level = leaf_sums(0, nleaf)
    while level.shape[0] > 1:
        if level.shape[0] % 2:
            level = np.concatenate([level, np.zeros((1,) + tail)], axis=0)
        level = level[0::2] + level[1::2]
    return level[0]


def _close(a: float, b: float, tol: float = 1e-12) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class Grid2D:
    """Uniform lattice ``x0[k] + i * dx[k]`` for ``i < n[k]`` on each axis."""

    x0: tuple[float, float]
    dx: tuple[float, float]
    n: tuple[int, int]

    def __post_init__(self):
        x0 = tuple(float(v) for v in self.x0)
        dx = tuple(float(v) for v in self.dx)
        n = tuple(int(v) for v in self.n)
        if len(x0) != 2 or len(dx) != 2 or len(n) != 2:
            raise InvalidGrid("grid needs two origins, two spacings and two counts")
        if not all(math.isfinite(v) for v in x0 + dx):
            raise InvalidGrid("grid origin and spacing must be finite")
        if min(dx) <= 0:
            raise InvalidGrid(f"grid spacing must be positive, got {dx}")
        if min(n) < 2:
            raise InvalidGrid(f"grid needs at least 2 points per axis, got {n}")
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "n", n)

    @classmethod
    def symmetric(cls, dx, n) -> Grid2D:
        """Grid centred on the origin: ``x0 = -(n - 1) dx / 2``."""
        dx = _pair(dx)
        n = tuple(int(v) for v in _pair(n))
        return cls(tuple(-(m - 1) * h / 2 for h, m in zip(dx, n)), dx, n)

    @classmethod
    def centered(cls, half_width, n) -> Grid2D:
        """Cell centres of ``n`` equal cells covering ``[-L, L]`` per axis."""
        L = _pair(half_width)
        n = tuple(int(v) for v in _pair(n))
        return cls.symmetric(tuple(2 * l / m for l, m in zip(L, n)), n)

    @classmethod
    def parse(cls, text: str) -> Grid2D:
        """Parse ``o1,o2,d1,d2,n1,n2``."""
        parts = text.split(",")
        if len(parts) != 6:
            raise ValueError(f"expected 'o1,o2,d1,d2,n1,n2', got {text!r}")
        o1, o2, d1, d2 = (float(p) for p in parts[:4])
        n1, n2 = (int(p) for p in parts[4:])
        return cls((o1, o2), (d1, d2), (n1, n2))

    def __str__(self) -> str:
        return ",".join(repr(v) for v in self.x0 + self.dx) + f",{self.n[0]},{self.n[1]}"

    @property
    def shape(self) -> tuple[int, int]:
        return self.n

    @property
    def cell(self) -> float:
        return self.dx[0] * self.dx[1]

    @property
    def size(self) -> int:
        return self.n[0] * self.n[1]

    def axis(self, k: int) -> np.ndarray:
        """Coordinates along axis ``k`` (1 or 2)."""
        i = k - 1
        return self.x0[i] + np.arange(self.n[i]) * self.dx[i]

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis(1), self.axis(2), indexing="ij")

    def is_symmetric(self, tol: float = ALIGN_TOL) -> bool:
        return all(abs(x0 / h + (m - 1) / 2) <= tol
                   for x0, h, m in zip(self.x0, self.dx, self.n))

    def matches(self, other: Grid2D) -> bool:
        return (self.n == other.n
                and all(_close(a, b) for a, b in zip(self.dx, other.dx))
                and all(abs(a - b) <= 1e-12 * max(1.0, h) for a, b, h in zip(self.x0, other.x0, self.dx)))

    def refined(self, factor: int = 2) -> Grid2D:
        """Same extent (cell-centre reading), ``factor`` times more points."""
        dx = tuple(h / factor for h in self.dx)
        x0 = tuple(a - h / 2 + g / 2 for a, h, g in zip(self.x0, self.dx, dx))
        return Grid2D(x0, dx, tuple(m * factor for m in self.n))


def _pair(v):
    if np.ndim(v) == 0:
        return (float(v), float(v))
    a, b = v
    return (float(a), float(b))


def require_same_grid(a: Grid2D, b: Grid2D, what: str = "fields") -> None:
    if not a.matches(b):
        raise GridMismatch(f"{what} live on different grids: {a} vs {b}")


class QField2D:
    """Quaternion samples on a :class:`Grid2D`, stored as ``(n1, n2, 4)``.

    Instances are immutable: the sample array is copied and marked read-only.
    """

    __slots__ = ("grid", "data")

    def __init__(self, grid: Grid2D, data):
        arr = np.array(data, dtype=float)
        if arr.shape == grid.n + (4,):
            pass
        elif arr.shape == (grid.size, 4):
            arr = arr.reshape(grid.n + (4,))
        elif arr.shape == grid.n:
            arr = np.stack([arr, *(np.zeros_like(arr),) * 3], axis=-1)
        else:
            raise GridMismatch(f"data shape {arr.shape} does not fit grid {grid.n}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteSample("field contains NaN or Inf samples")
        arr.flags.writeable = False
        self.grid = grid
        self.data = arr

    def __repr__(self) -> str:
        return f"{type(self).__name__}(grid={self.grid}, norm={l2_norm(self):.6g})"

    @classmethod
    def zeros(cls, grid: Grid2D):
        return cls(grid, np.zeros(grid.n + (4,)))

    @classmethod
    def from_function(cls, grid: Grid2D, fn):
        """Sample ``fn(x1, x2)`` on the mesh; ``fn`` returns ``(n1, n2[, 4])``."""
        x1, x2 = grid.mesh()
        return cls(grid, fn(x1, x2))

    def _new(self, data):
        return type(self)(self.grid, data)

    def _other(self, other):
        require_same_grid(self.grid, other.grid)
        return other.data

    def __add__(self, other):
        return self._new(self.data + self._other(other))

    def __sub__(self, other):
        return self._new(self.data - self._other(other))

    def __neg__(self):
        return self._new(-self.data)

    def __mul__(self, scale: float):
        return self._new(self.data * float(scale))

    __rmul__ = __mul__

    def lmul(self, q: Quaternion):
        """Left-multiply every sample by the constant ``q``."""
        return self._new(qmul(q.to_array(), self.data))

    def rmul(self, q: Quaternion):
        """Right-multiply every sample by the constant ``q``."""
        return self._new(qmul(self.data, q.to_array()))

    def conj(self):
        return self._new(qconj(self.data))

    def abs2(self) -> np.ndarray:
        return qabs2(self.data)

    def at(self, i1: int, i2: int) -> Quaternion:
        return Quaternion.from_array(self.data[i1, i2])


def inner_product(f: QField2D, g: QField2D, workers: int = 1) -> Quaternion:
    """Midpoint quadrature of ``integral f(x) conj(g(x)) dx``."""
    require_same_grid(f.grid, g.grid)
    terms = qmul(f.data, qconj(g.data)).reshape(-1, 4)
    return Quaternion.from_array(tree_sum(terms, workers) * f.grid.cell)


def scalar_inner_product(f: QField2D, g: QField2D, workers: int = 1) -> float:
    require_same_grid(f.grid, g.grid)
    terms = np.einsum("...c,...c->...", f.data, g.data).reshape(-1)
    return float(tree_sum(terms, workers)) * f.grid.cell


def l2_norm(f: QField2D, workers: int = 1) -> float:
    return math.sqrt(float(tree_sum(f.abs2().reshape(-1), workers)) * f.grid.cell)


def lattice_offset(value: float, spacing: float, error=NonGridShift, what: str = "shift") -> int:
    """Integer number of lattice steps in ``value``; raises ``error`` otherwise."""
    t = value / spacing
    k = round(t)
    if abs(t - k) > ALIGN_TOL:
        raise error(f"{what} {value!r} is not a multiple of the lattice spacing {spacing!r}")
    return int(k)


def shift_array(a: np.ndarray, s1: int, s2: int) -> np.ndarray:
    """``out[i1, i2] = a[i1 - s1, i2 - s2]`` over the first two axes, zero-filled."""
    out = np.zeros_like(a)
    n1, n2 = a.shape[:2]
    if abs(s1) >= n1 or abs(s2) >= n2:
        return out
    dst1 = slice(max(s1, 0), n1 + min(s1, 0))
    src1 = slice(max(-s1, 0), n1 - max(s1, 0))
    dst2 = slice(max(s2, 0), n2 + min(s2, 0))
    src2 = slice(max(-s2, 0), n2 - max(s2, 0))
    out[dst1, dst2] = a[src1, src2]
    return out


def shift_field(f: QField2D, r) -> QField2D:
    """Translate ``f(x) -> f(x - r)`` by a whole number of samples."""
    r1, r2 = _pair(r)
    s1 = lattice_offset(r1, f.grid.dx[0])
    s2 = lattice_offset(r2, f.grid.dx[1])
    return QField2D(f.grid, shift_array(f.data, s1, s2))


def modulate_field(f: QField2D, s) -> QField2D:
    """``exp(i x1 s1) f(x) exp(j x2 s2)``."""
    s1, s2 = _pair(s)
    t1 = f.grid.axis(1) * s1
    t2 = f.grid.axis(2) * s2
    left = np.zeros((t1.size, 1, 4))
    left[:, 0, 0], left[:, 0, 1] = np.cos(t1), np.sin(t1)
    right = np.zeros((1, t2.size, 4))
    right[0, :, 0], right[0, :, 2] = np.cos(t2), np.sin(t2)
    return QField2D(f.grid, qmul(qmul(left, f.data), right))


def parity_field(f: QField2D) -> QField2D:
    """``f(-x)``; needs a grid symmetric about the origin."""
    if not f.grid.is_symmetric():
        raise AsymmetricGrid(f"parity needs a grid symmetric about 0, got {f.grid}")
    return QField2D(f.grid, f.data[::-1, ::-1])
