"""Independent reference computations used by the tests.

Nothing here imports limitlab; every value is rebuilt from first principles
(mpmath quadrature, exact binomial arithmetic, direct kernel polynomials).
"""

import math
from fractions import Fraction

import mpmath as mp
import numpy as np

mp.mp.dps = 30


def phi_by_integration(t):
    """Normal CDF as the integral of the density, to ~1e-25."""
    t = mp.mpf(t)
    dens = lambda x: mp.exp(-x * x / 2) / mp.sqrt(2 * mp.pi)
    if t <= 0:
        return float(mp.quad(dens, [-mp.inf, t]))
    return float(1 - mp.quad(dens, [t, mp.inf]))


def beta3_cdf_by_integration(u):
    """CDF of Beta(3, 3) on [0, 1] by integrating 30 u^2 (1-u)^2."""
    return float(mp.quad(lambda x: 30 * x**2 * (1 - x) ** 2, [0, u]))


def beta_cdf(u, k):
    """Closed-form Beta(k, k) CDF, vectorized, clipped to [0, 1]."""
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    if k == 3:
        return 10 * u**3 - 15 * u**4 + 6 * u**5
    return 3 * u**2 - 2 * u**3


def kernel_cdf(w, delta, k):
    return beta_cdf((np.asarray(w, dtype=float) / delta + 1.0) / 2.0, k)


def kernel_pdf2(w, delta, k):
    """Second derivative of the kernel CDF (order 3), zero outside the support."""
    u = (np.asarray(w, dtype=float) / delta + 1.0) / 2.0
    inside = (u > 0) & (u < 1)
    d2 = (60 * u - 180 * u**2 + 120 * u**3) / (2 * delta) ** 2
    return np.where(inside, d2, 0.0)


def rademacher_sum_masses(n):
    """Exact masses C(n, k) / 2^n at 2k - n."""
    return {2 * k - n: Fraction(math.comb(n, k), 2**n) for k in range(n + 1)}


def binomial_clt_distance(n):
    """sup_t |F_{S_n}(t) - Phi(t)| for Rademacher S_n = U_n / sqrt(n).

    For an atomic law against a continuous CDF the supremum is attained at an
    atom, from the left or the right.
    """
    masses = rademacher_sum_masses(n)
    best, acc = 0.0, Fraction(0)
    for loc in sorted(masses):
        x = mp.mpf(loc) / mp.sqrt(n)
        phi = mp.ncdf(x)
        left = mp.mpf(acc.numerator) / acc.denominator
        acc += masses[loc]
        right = mp.mpf(acc.numerator) / acc.denominator
        best = max(best, float(abs(left - phi)), float(abs(right - phi)))
    return best


def binomial_wlln_cdf(n, t):
    """Exact F_{U_n / n}(t) for Rademacher summands."""
    acc = Fraction(0)
    for loc, p in rademacher_sum_masses(n).items():
        if Fraction(loc, n) <= Fraction(t).limit_denominator(10**9):
            acc += p
    return float(acc)


def smoothed_atoms(locs, ps, t, delta, k):
    """sum_i p_i F_W(t - x_i), evaluated directly."""
    t = np.asarray(t, dtype=float)[..., None]
    return np.sum(np.asarray(ps) * kernel_cdf(t - np.asarray(locs), delta, k), axis=-1)


# Frozen outputs of slower mpmath oracles (30 digits, adaptive tanh-sinh).
# F_{W+N}(1) for W of order 3 and half-width 1.
GAUSS_SMOOTHED_AT_1 = 0.82497906255406366
# Swap bound cell: kernel (3, 0.5), X = Rademacher / sqrt 2, Y = N(0, 1/2), n = 2.
SWAP_LHS = 0.10514483262153405
SWAP_SINGLE = 0.18300074502803353
# ||F_{W+R/8} - F_{W+N/8}|| for the order-3 kernel of half-width 1 (Rademacher R):
# maximum of a dense mpmath grid near w = -1.02, hence a lower bound.
PAIR_RAD_NORMAL_64 = 0.00053413440644356555
