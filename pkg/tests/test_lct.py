import numpy as np
import pytest

from qwlct.errors import DegenerateB, DetNotOne
from qwlct.lct import LCTPair, LCTParams, inverse_params, parse_params, validate

from conftest import random_params


def test_valid_examples():
    assert validate(0, 1, -1, 0) == LCTParams(0, 1, -1, 0)
    assert validate(2, 1, 1, 1).det == 1


def test_identity_matrix_is_degenerate():
    with pytest.raises(DegenerateB):
        validate(1, 0, 0, 1)


@pytest.mark.parametrize("entries", [(1, 1, 1, 1), (2, 1, 0, 1), (1, 1e-3, 0, 1.01)])
def test_non_unimodular_rejected(entries):
    with pytest.raises(DetNotOne):
        validate(*entries)


def test_non_finite_rejected():
    with pytest.raises(DetNotOne):
        validate(float("nan"), 1, -1, 0)


def test_inverse_examples():
    assert inverse_params(validate(0, 1, -1, 0)) == LCTParams(0, -1, 1, 0)
    assert inverse_params(validate(2, 1, 1, 1)) == LCTParams(1, -1, -1, 2)


def test_inverse_composes_to_identity(rng):
    for _ in range(200):
        p = random_params(rng)
        q = inverse_params(p)
        prod = np.array(p.matrix()) @ np.array(q.matrix())
        np.testing.assert_allclose(prod, np.eye(2), atol=1e-12)
        assert inverse_params(q) == p
        assert validate(p.a, p.b, p.c, p.d) == p


def test_pair_inverse_and_b():
    P = LCTPair(validate(2, 1, 1, 1), validate(1, 3, 0, 1))
    assert P.b(1) == 1 and P.b(2) == 3
    assert P.inverse().A2 == LCTParams(1, -3, 0, 1)


def test_parse_params():
    assert parse_params("0,1,-1,0") == LCTParams(0, 1, -1, 0)
    assert str(parse_params("2,1,1,1")) == "2.0,1.0,1.0,1.0"
    with pytest.raises(DegenerateB):
        parse_params("1,0,0,1")
    for bad in ("1,2,3", "a,1,-1,0", "0, 1,-1,0", ""):
        with pytest.raises(ValueError):
            parse_params(bad)
