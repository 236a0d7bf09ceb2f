import numpy as np
import pytest
from hypothesis import strategies as st

from qwlct.field import Grid2D, QField2D
from qwlct.quaternion import Quaternion
from qwlct.verify import CHIRPY, FOURIER_LIKE, FRESNEL_MIX


# magnitudes below 1e-70 are mapped to 0 so that squared triple products
# stay clear of the subnormal range, where relative error bounds stop holding
finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False).map(
    lambda v: v if abs(v) > 1e-70 else 0.0)
quaternions = st.builds(Quaternion, finite, finite, finite, finite)


def random_field(grid, rng):
    return QField2D(grid, rng.standard_normal(grid.n + (4,)))


def random_params(rng):
    """Random unimodular (a, b, c, d) with |b| bounded away from zero."""
    from qwlct.lct import validate
    a = rng.uniform(-2, 2)
    b = rng.uniform(0.5, 2) * rng.choice([-1, 1])
    d = rng.uniform(-2, 2)
    return validate(a, b, (a * d - 1) / b, d)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=["fourier", "chirpy", "fresnel"])
def pair(request):
    return {"fourier": FOURIER_LIKE, "chirpy": CHIRPY, "fresnel": FRESNEL_MIX}[request.param]


@pytest.fixture
def small_grid():
    return Grid2D.symmetric(0.5, 8)


# acceptance results, one line per criterion, echoed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
