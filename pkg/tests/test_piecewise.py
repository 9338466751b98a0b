import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.polynomial import polynomial as P

from limitlab.piecewise import PiecewisePoly, real_roots_in, scale_argument, taylor_shift

coeffs = st.lists(st.floats(-5, 5), min_size=1, max_size=6)


@given(coeffs, st.floats(-3, 3), st.floats(-2, 2))
def test_taylor_shift_matches_evaluation(c, d, x):
    assert P.polyval(x, taylor_shift(c, d)) == pytest.approx(P.polyval(x + d, c), abs=1e-7)


@given(coeffs, st.floats(0.1, 4), st.floats(-2, 2))
def test_scale_argument(c, a, x):
    assert P.polyval(x, scale_argument(c, a)) == pytest.approx(P.polyval(a * x, c), abs=1e-7)


def test_real_roots_in_window():
    # (x - 0.25)(x - 0.75)(x - 3)
    c = P.polyfromroots([0.25, 0.75, 3.0])
    assert np.allclose(np.sort(real_roots_in(c, 1.0)), [0.25, 0.75])


def test_evaluation_right_continuity_and_tails():
    pp = PiecewisePoly([0.0, 1.0, 2.0], [[0.0, 1.0], [0.5]], left=0.0, right=1.0)
    assert pp(-1.0) == 0.0
    assert pp(0.5) == pytest.approx(0.5)
    assert pp(1.0) == 0.5 and pp.left_limit(1.0) == pytest.approx(1.0)
    assert pp(2.0) == 1.0 and pp.left_limit(2.0) == pytest.approx(0.5)


def test_sup_abs_finds_interior_extremum():
    # x(1 - x) on [0, 1] peaks at 1/2
    pp = PiecewisePoly([0.0, 1.0], [[0.0, 1.0, -1.0]])
    v, t = pp.sup_abs()
    assert v == pytest.approx(0.25, abs=1e-15) and t == pytest.approx(0.5)


def test_constructor_rejects_bad_knots():
    with pytest.raises(ValueError):
        PiecewisePoly([1.0, 0.0], [[1.0]])
