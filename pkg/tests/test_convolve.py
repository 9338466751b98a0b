import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from limitlab import (Distribution, affine_transform, convolve_pair, gauss_smoothed_cdf,
                      make_smoother, smoothed_cdf_at, smoothed_cdf_curve, smoothed_distance,
                      sum_iid)
from limitlab.convolve import MAX_CERT_ERROR
from limitlab.errors import CertificationError, PreconditionError

R3 = math.sqrt(3.0)


def test_point_mass_is_identity(k31):
    t = np.linspace(-2, 2, 41)
    got = smoothed_cdf_at(k31, Distribution.deterministic(0.0), t)
    assert np.array_equal(got, k31.derivative(t))


def test_two_atom_example(k31):
    x = Distribution.from_atoms([-0.5, 0.5], [0.5, 0.5])
    want = 0.5 * (oracles.kernel_cdf(0.75, 1, 3) + oracles.kernel_cdf(-0.25, 1, 3))
    got = smoothed_cdf_at(k31, x, 0.25)
    assert got == pytest.approx(float(want), abs=1e-15)
    assert got == pytest.approx(0.629578, abs=5e-7)


def test_symmetric_at_zero(k31, rad, unif):
    for x in (rad, unif, Distribution.normal()):
        assert smoothed_cdf_at(k31, x, 0.0) == pytest.approx(0.5, abs=1e-12)


def test_curve_breakpoints(k31, rad):
    c = smoothed_cdf_curve(k31, rad)
    assert c.exact and np.array_equal(c.breakpoints, [-2.0, 0.0, 2.0])
    assert np.max(np.abs(c(np.linspace(-3, 3, 61))
                         - smoothed_cdf_curve(k31, Distribution.deterministic(0.0))(
                             np.linspace(-3, 3, 61) + 1) * 0.5
                         - k31.derivative(np.linspace(-3, 3, 61) - 1) * 0.5)) <= 1e-14


@pytest.mark.parametrize("k, d", [(2, 0.25), (2, 1.0), (3, 0.5), (3, 1.0)])
def test_derivative_bounded_by_m1(k, d, rad, unif):
    K = make_smoother(d, k)
    for x in (rad, unif, Distribution.from_atoms([-0.1, 0.05, 0.4], [0.3, 0.3, 0.4])):
        dens = smoothed_cdf_curve(K, x).pp.derivative()
        assert dens.sup_abs()[0] <= K.bounds.m1 + 1e-12


def test_gauss_smoothed_examples(k31):
    assert gauss_smoothed_cdf(k31, 1.0, 0.0) == pytest.approx(0.5, abs=1e-12)
    assert gauss_smoothed_cdf(k31, 1.0, 1.0) == pytest.approx(oracles.GAUSS_SMOOTHED_AT_1, abs=1e-12)
    for sigma in (0.05, 1.0, 4.0):
        assert gauss_smoothed_cdf(k31, sigma, 10 + 1 + 10 * sigma) >= 1 - 1e-9
    with pytest.raises(PreconditionError):
        gauss_smoothed_cdf(k31, 0.0, 1.0)


@pytest.mark.parametrize("sigma", [0.1, 0.5, 1.0, 3.0])
@pytest.mark.parametrize("k, d", [(2, 0.25), (3, 1.0)])
def test_normal_paths_agree(sigma, k, d):
    K = make_smoother(d, k)
    curve = smoothed_cdf_curve(K, Distribution.normal(0.0, sigma))
    assert curve.cert_error <= MAX_CERT_ERROR
    t = np.linspace(-3, 3, 25)
    quad = np.array([gauss_smoothed_cdf(K, sigma, x) for x in t])
    assert np.max(np.abs(curve(t) - quad)) <= 2e-11
    assert np.max(np.abs(curve.sf(t) - (1 - quad))) <= 2e-11


def test_exp1_quadrature_path(k31):
    c = smoothed_cdf_curve(k31, Distribution.exp1())
    assert not c.exact and c.cert_error <= MAX_CERT_ERROR
    grid = np.linspace(-4, 8, 200)
    v = c(grid)
    assert np.all(np.diff(v) >= -2 * c.cert_error)
    assert c(-3.0) == 0.0 and c(40.0) >= 1 - 1e-9


def test_impossible_tolerance_raises(k31):
    with pytest.raises(CertificationError):
        smoothed_cdf_at(k31, Distribution.exp1(), 0.3, tol=1e-30)


@pytest.mark.parametrize("k, d", [(2, 0.5), (3, 1.0)])
def test_commutes_with_sum_path(k, d):
    K = make_smoother(d, k)
    t = np.linspace(-5, 5, 201)
    for x in (Distribution.rademacher(), Distribution.uniform(-R3, R3),
              sum_iid(Distribution.uniform(0, 1), 4), sum_iid(Distribution.rademacher(), 7)):
        via = convolve_pair(x, K.distribution).cdf(t)
        assert np.max(np.abs(smoothed_cdf_at(K, x, t) - via)) <= 1e-10


@given(st.floats(0, 1), st.floats(0.0, 2.0))
def test_stochastic_order_preserved(p, shift):
    K = make_smoother(0.5, 3)
    x = Distribution.from_atoms([-1.0, 1.0], [p, 1 - p]) if 0 < p < 1 else Distribution.rademacher()
    y = affine_transform(x, 1.0, shift)  # F_y <= F_x pointwise
    t = np.linspace(-3, 5, 1000)
    assert np.all(smoothed_cdf_at(K, y, t) <= smoothed_cdf_at(K, x, t) + 1e-15)


@pytest.mark.parametrize("x", [Distribution.rademacher(), Distribution.uniform(-R3, R3),
                               Distribution.normal(0, 0.7)])
def test_symmetry(x, k21):
    c = smoothed_cdf_curve(k21, x)
    t = np.linspace(-4, 4, 81)
    assert np.max(np.abs(c(t) + c(-t) - 1)) <= 1e-10


def test_smoothed_distance_matches_oracle(rad):
    K = make_smoother(0.5, 3)
    a = smoothed_cdf_curve(K, affine_transform(rad, 1 / math.sqrt(2), 0))
    b = smoothed_cdf_curve(K, Distribution.normal(0, 1 / math.sqrt(2)))
    r = smoothed_distance(a, b)
    assert r.enclosure <= 1e-9
    assert r.value - 1e-12 <= oracles.SWAP_SINGLE <= r.upper + 1e-12
