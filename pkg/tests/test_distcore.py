import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

import oracles
from limitlab import (AtomCapExceeded, DegenerateInputError, Distribution, Kind, PreconditionError,
                      UncertifiableError, UnsupportedKindError, affine_transform, cdf_at,
                      convolve_pair, moment_summary, standardize, sum_iid, sup_distance,
                      tail_moment)

R3 = math.sqrt(3.0)


@st.composite
def atomic_laws(draw, max_atoms=5):
    k = draw(st.integers(1, max_atoms))
    locs = draw(st.lists(st.integers(-6, 6), min_size=k, max_size=k, unique=True))
    w = draw(st.lists(st.integers(1, 9), min_size=k, max_size=k))
    return Distribution.from_atoms([x / 2 for x in locs], [v / sum(w) for v in w])


@st.composite
def exact_laws(draw):
    kind = draw(st.sampled_from(["atoms", "uniform", "mixed"]))
    if kind == "atoms":
        return draw(atomic_laws())
    a = draw(st.integers(-4, 3)) / 2
    u = Distribution.uniform(a, a + draw(st.integers(1, 4)) / 2)
    if kind == "uniform":
        return u
    return convolve_pair(u, draw(atomic_laws(3)))


# constructors and cdf_at

def test_cdf_examples(rad):
    d0 = Distribution.deterministic(0.0)
    assert cdf_at(d0, -0.1) == 0.0
    assert cdf_at(d0, 0.0) == 1.0
    assert cdf_at(rad, 0.0) == 0.5


def test_kinds(rad, unif):
    assert rad.kind == Kind.ATOMIC
    assert unif.kind == Kind.POLYNOMIAL
    assert convolve_pair(rad, unif).kind == Kind.POLYNOMIAL
    assert Distribution(locs=[0.0], masses=[0.5], segments=[(1.0, 2.0, [0.5])]).kind == Kind.MIXED
    assert Distribution.normal().kind == Kind.ANALYTIC


def test_constructor_rejects_bad_mass():
    with pytest.raises(PreconditionError):
        Distribution.from_atoms([0.0, 1.0], [0.5, 0.6])
    with pytest.raises(PreconditionError):
        Distribution(segments=[(0.0, 1.0, [1.0, -3.0])])  # negative density near 1


def test_constructor_renormalizes_tiny_drift():
    d = Distribution.from_atoms([0.0, 1.0], [0.5, 0.5 + 5e-13])
    assert abs(d.masses.sum() - 1.0) <= 1e-15


@given(exact_laws())
def test_cdf_monotone_with_limits(d):
    lo, hi = d.support
    grid = np.linspace(lo - 1, hi + 1, 1000)
    v = d.cdf(grid)
    assert np.all(np.diff(v) >= -1e-15)
    assert abs(d.cdf(hi + 1) - 1.0) <= 1e-12 and d.cdf(lo - 1) == 0.0


@given(atomic_laws())
def test_right_continuity_at_atoms(d):
    for x, m in zip(d.locs, d.masses):
        assert d.cdf(x) - d.cdf_left(x) == pytest.approx(m, abs=1e-15)


# moments

def test_moment_examples(rad, unif):
    m = moment_summary(rad)
    assert (m.mean, m.variance, m.abs_mean) == (0.0, 1.0, 1.0)
    m = moment_summary(unif)
    assert m.mean == pytest.approx(0.0, abs=1e-15) and m.variance == pytest.approx(1.0, abs=1e-14)
    m = moment_summary(Distribution.from_atoms([1.0, 5.0], [0.5, 0.5]))
    assert (m.mean, m.variance) == (3.0, 4.0)


def test_analytic_moments_declared():
    m = moment_summary(Distribution.exp1())
    assert m.mean == pytest.approx(0.0, abs=1e-15) and m.variance == pytest.approx(1.0)
    assert m.abs_mean == pytest.approx(2 / math.e, rel=1e-14)


def test_tail_moment_examples(rad, unif):
    assert tail_moment(rad, 2, 0.5) == 1.0
    assert tail_moment(rad, 2, 1.0) == 0.0
    assert tail_moment(unif, 2, 1.0) == pytest.approx(1 - 1 / (3 * R3), abs=1e-14)
    with pytest.raises(PreconditionError):
        tail_moment(rad, 3, 0.0)


@given(exact_laws(), st.sampled_from([1, 2]))
def test_tail_moment_monotone(d, p):
    m = moment_summary(d)
    full = m.abs_mean if p == 1 else m.variance + m.mean**2
    assert tail_moment(d, p, 0.0) == pytest.approx(full, abs=1e-12)
    vals = [tail_moment(d, p, y) for y in np.linspace(0, 4, 41)]
    assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))


# standardize and affine maps

def test_standardize_examples(rad):
    s = standardize(Distribution.from_atoms([1.0, 5.0], [0.5, 0.5]), "clt")
    assert np.array_equal(s.locs, [-1.0, 1.0])
    assert standardize(rad, "clt").cdf(0.0) == 0.5
    u = standardize(Distribution.uniform(0.0, 1.0), "clt")
    assert u.support == pytest.approx((-R3, R3), abs=1e-14)
    with pytest.raises(DegenerateInputError):
        standardize(Distribution.deterministic(2.0), "clt")
    with pytest.raises(DegenerateInputError):
        standardize(Distribution.deterministic(2.0), "wlln")


@given(exact_laws(), st.sampled_from(["clt", "wlln"]))
def test_standardize_idempotent(d, mode):
    assume(moment_summary(d).variance > 1e-6)
    s1 = standardize(d, mode)
    s2 = standardize(s1, mode)
    m = moment_summary(s1)
    assert abs(m.mean) <= 1e-12
    assert abs((m.variance if mode == "clt" else m.abs_mean) - 1.0) <= 1e-12
    grid = np.linspace(-4, 4, 100)
    assert np.max(np.abs(s1.cdf(grid) - s2.cdf(grid))) <= 1e-12


def test_affine_examples(rad):
    assert affine_transform(rad, 1, 0) is rad
    h = affine_transform(rad, 0.5, 0)
    assert np.array_equal(h.locs, [-0.5, 0.5]) and np.array_equal(h.masses, [0.5, 0.5])
    u = affine_transform(Distribution.uniform(0.0, 1.0), 2, -1)
    assert u.support == (-1.0, 1.0) and u.segments[0].coeffs[0] == pytest.approx(0.5)
    with pytest.raises(DegenerateInputError):
        affine_transform(rad, 0, 1)


@given(exact_laws(), st.floats(-3, 3).filter(lambda a: abs(a) > 0.1), st.floats(-2, 2))
def test_affine_cdf_identity(d, a, b):
    t = np.linspace(-5, 5, 37)
    img = affine_transform(d, a, b)
    x = (t - b) / a
    want = d.cdf(x) if a > 0 else 1.0 - d.cdf_left(x)
    assert np.max(np.abs(img.cdf(t) - want)) <= 1e-12


def test_normal_affine_is_analytic():
    n = affine_transform(Distribution.normal(), 2.0, 1.0)
    assert n.kind == Kind.ANALYTIC and n.cdf(1.0) == 0.5


# sums

def test_sum_examples(rad):
    assert sum_iid(rad, 1) is rad
    s2 = sum_iid(rad, 2)
    assert np.array_equal(s2.locs, [-2.0, 0.0, 2.0]) and np.array_equal(s2.masses, [0.25, 0.5, 0.25])
    z = sum_iid(Distribution.deterministic(0.0), 5)
    assert np.array_equal(z.locs, [0.0]) and z.masses[0] == 1.0


@pytest.mark.parametrize("n", [1, 2, 5, 17, 32, 53, 64])
def test_binomial_oracle(rad, n):
    s = sum_iid(rad, n)
    ref = oracles.rademacher_sum_masses(n)
    assert np.array_equal(s.locs, np.array(sorted(ref), dtype=float))
    want = np.array([float(ref[k]) for k in sorted(ref)])
    # C(n, k) / 2^n is a double only up to n = 53; beyond that allow one ulp
    assert np.all(np.abs(s.masses - want) <= np.spacing(want))


@given(atomic_laws(3), st.integers(1, 20), st.integers(1, 20))
def test_sum_splits(d, m, k):
    whole = sum_iid(d, m + k)
    parts = convolve_pair(sum_iid(d, m), sum_iid(d, k))
    assert sup_distance(whole, parts).value <= 1e-10


def test_uniform_sums_are_irwin_hall():
    s = sum_iid(Distribution.uniform(0.0, 1.0), 3)
    assert s.cdf(1.5) == pytest.approx(0.5, abs=1e-14)
    assert s.cdf(1.0) == pytest.approx(1 / 6, abs=1e-14)
    assert moment_summary(s).variance == pytest.approx(0.25, abs=1e-13)


def test_sum_errors():
    with pytest.raises(UnsupportedKindError):
        sum_iid(Distribution.exp1(), 3)
    locs = np.sort(np.random.default_rng(0).random(40))  # generic: sums never coincide
    wide = Distribution.from_atoms(locs, np.full(40, 1 / 40))
    with pytest.raises(AtomCapExceeded):
        sum_iid(wide, 6, max_atoms=10_000)


def test_normal_sums_close_in_form():
    s = sum_iid(Distribution.normal(), 4)
    assert s.kind == Kind.ANALYTIC and s.cdf(2.0) == pytest.approx(0.8413447460685429, abs=1e-15)


# sup distance

def test_sup_distance_examples(rad):
    d0, d1 = Distribution.deterministic(0.0), Distribution.deterministic(1.0)
    assert sup_distance(rad, rad).value == 0.0
    r = sup_distance(d0, d1)
    assert r.value == 1.0 and 0.0 <= r.argmax < 1.0
    assert sup_distance(rad, d0).value == 0.5


@given(exact_laws(), exact_laws(), exact_laws())
def test_sup_distance_metric(f, g, h):
    fg, gf = sup_distance(f, g).value, sup_distance(g, f).value
    assert fg == gf
    assert fg <= sup_distance(f, h).value + sup_distance(h, g).value + 1e-12


def test_sup_distance_against_analytic_needs_bound(unif):
    with pytest.raises(UncertifiableError):
        sup_distance(unif, Distribution.normal())
    r = sup_distance(unif, Distribution.normal(), lipschitz_bound=1 / math.sqrt(2 * math.pi))
    assert r.enclosure <= 1e-9
    # uniform[-sqrt 3, sqrt 3] against Phi: maximum at the density crossing
    t = math.sqrt(2 * math.log(2 * R3 / math.sqrt(2 * math.pi)))
    exact = abs((t + R3) / (2 * R3) - oracles.phi_by_integration(t))
    assert r.value <= exact <= r.upper
