import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qwlct.errors import (AsymmetricGrid, GridMismatch, InvalidGrid, NonFiniteSample,
                          NonGridShift)
from qwlct.field import (Grid2D, QField2D, inner_product, l2_norm, modulate_field, parity_field,
                         scalar_inner_product, shift_field, tree_sum)
from qwlct.quaternion import I, Quaternion, mul, qmul

from conftest import random_field


def test_grid_validation():
    with pytest.raises(InvalidGrid):
        Grid2D((0, 0), (0.0, 1.0), (4, 4))
    with pytest.raises(InvalidGrid):
        Grid2D((0, 0), (1.0, 1.0), (1, 4))
    with pytest.raises(InvalidGrid):
        Grid2D((math.inf, 0), (1.0, 1.0), (4, 4))


def test_grid_constructors():
    g = Grid2D.centered(8, 128)
    assert g.dx == (0.125, 0.125) and g.is_symmetric()
    np.testing.assert_allclose(g.axis(1)[[0, -1]], [-8 + 0.0625, 8 - 0.0625])
    assert Grid2D.parse(str(g)) == g
    r = g.refined(2)
    assert r.n == (256, 256) and r.is_symmetric()
    assert not Grid2D((0, 0), (1, 1), (4, 4)).is_symmetric()


def test_field_shapes_and_immutability(small_grid):
    f = QField2D(small_grid, np.ones(small_grid.n))
    assert f.data.shape == (8, 8, 4) and f.data[0, 0, 0] == 1 and f.data[0, 0, 1] == 0
    flat = QField2D(small_grid, np.zeros((64, 4)))
    assert flat.data.shape == (8, 8, 4)
    with pytest.raises(ValueError):
        f.data[0, 0, 0] = 2
    with pytest.raises(GridMismatch):
        QField2D(small_grid, np.zeros((7, 8, 4)))
    bad = np.zeros((8, 8, 4))
    bad[1, 1, 2] = np.nan
    with pytest.raises(NonFiniteSample):
        QField2D(small_grid, bad)


def test_arithmetic_requires_same_grid(small_grid):
    f = QField2D.zeros(small_grid)
    g = QField2D.zeros(Grid2D.symmetric(0.25, 8))
    with pytest.raises(GridMismatch):
        f + g
    with pytest.raises(GridMismatch):
        inner_product(f, g)


def test_gaussian_inner_product():
    g = Grid2D.centered(6, 128)
    f = QField2D.from_function(g, lambda a, b: np.exp(-a * a - b * b))
    ip = inner_product(f, f)
    assert abs(ip.s - math.pi / 2) <= 1e-8
    assert max(abs(ip.x), abs(ip.y), abs(ip.z)) <= 1e-12 * ip.s
    assert l2_norm(f) ** 2 == pytest.approx(scalar_inner_product(f, f), rel=1e-15)


def test_inner_product_matches_direct_sum(small_grid, rng):
    f = random_field(small_grid, rng)
    g = f.rmul(I)
    acc = Quaternion()
    for i1 in range(8):
        for i2 in range(8):
            acc = acc + mul(f.at(i1, i2), g.at(i1, i2).conj())
    want = acc * small_grid.cell
    got = inner_product(f, g)
    assert max(abs(a - b) for a, b in zip(got, want)) <= 1e-12 * (1 + want.norm())


def test_scalar_inner_product_symmetry_and_zero(small_grid, rng):
    f, g = random_field(small_grid, rng), random_field(small_grid, rng)
    assert scalar_inner_product(f, g) == pytest.approx(scalar_inner_product(g, f), rel=1e-14)
    assert scalar_inner_product(QField2D.zeros(small_grid), f) == 0
    assert scalar_inner_product(f, g) == pytest.approx(inner_product(f, g).s, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_cauchy_schwarz(seed):
    rng = np.random.default_rng(seed)
    grid = Grid2D.symmetric(0.5, 6)
    f, g = random_field(grid, rng), random_field(grid, rng)
    assert inner_product(f, g).norm() ** 2 <= l2_norm(f) ** 2 * l2_norm(g) ** 2 * (1 + 1e-10)


def test_tree_sum_is_bitwise_independent_of_workers(rng):
    v = rng.standard_normal((10_001, 4)) * 10.0 ** rng.integers(-8, 8, (10_001, 1))
    ref = tree_sum(v)
    for w in (2, 3, 8):
        np.testing.assert_array_equal(tree_sum(v, workers=w), ref)
    assert np.allclose(ref, v.sum(axis=0), rtol=1e-12, atol=1e-12 * np.abs(v).sum())
    grid = Grid2D.symmetric(0.1, 150)
    f = random_field(grid, rng)
    assert l2_norm(f, workers=4) == l2_norm(f)
    assert tree_sum(np.zeros((0, 4))).shape == (4,)


def test_shift_moves_samples(small_grid):
    data = np.zeros((8, 8, 4))
    data[3, 3] = [1, 2, 3, 4]
    f = QField2D(small_grid, data)
    assert np.array_equal(shift_field(f, (0, 0)).data, f.data)
    moved = shift_field(f, (0.5, 0)).data
    assert np.array_equal(moved[4, 3], [1, 2, 3, 4]) and moved[3, 3].sum() == 0
    with pytest.raises(NonGridShift):
        shift_field(f, (0.3, 0))


def test_shift_is_isometry_in_interior(rng):
    g = Grid2D.symmetric(0.5, 16)
    data = np.zeros((16, 16, 4))
    data[4:12, 4:12] = rng.standard_normal((8, 8, 4))
    f = QField2D(g, data)
    assert l2_norm(shift_field(f, (1.0, -1.5))) == pytest.approx(l2_norm(f), rel=1e-12)


def test_modulation(small_grid, rng):
    f = random_field(small_grid, rng)
    assert np.array_equal(modulate_field(f, (0, 0)).data, f.data)
    m = modulate_field(f, (0.7, -1.3))
    np.testing.assert_allclose(m.abs2(), f.abs2(), rtol=1e-13)
    real = QField2D(small_grid, rng.standard_normal(small_grid.n))
    m = modulate_field(real, (0.9, 0))
    x1 = small_grid.mesh()[0]
    np.testing.assert_allclose(m.data[..., 0], np.cos(0.9 * x1) * real.data[..., 0], atol=1e-15)
    np.testing.assert_allclose(m.data[..., 1], np.sin(0.9 * x1) * real.data[..., 0], atol=1e-15)


def test_modulation_order_is_left_i_right_j(small_grid, rng):
    f = random_field(small_grid, rng)
    s1, s2 = 0.4, 1.1
    m = modulate_field(f, (s1, s2))
    x1, x2 = small_grid.axis(1)[2], small_grid.axis(2)[5]
    left = np.array([math.cos(x1 * s1), math.sin(x1 * s1), 0, 0])
    right = np.array([math.cos(x2 * s2), 0, math.sin(x2 * s2), 0])
    np.testing.assert_allclose(m.data[2, 5], qmul(qmul(left, f.data[2, 5]), right), atol=1e-15)


def test_parity(small_grid, rng):
    f = random_field(small_grid, rng)
    assert np.array_equal(parity_field(parity_field(f)).data, f.data)
    even = QField2D.from_function(small_grid, lambda a, b: np.exp(-a * a - b * b))
    assert np.array_equal(parity_field(even).data, even.data)
    data = np.zeros((8, 8, 4))
    data[1, 6, 0] = 1
    flipped = parity_field(QField2D(small_grid, data)).data
    assert flipped[6, 1, 0] == 1
    with pytest.raises(AsymmetricGrid):
        parity_field(QField2D.zeros(Grid2D((0, 0), (1, 1), (4, 4))))
