"""Beta smoothing kernels and what smoothing does to a step function.

W = delta (2B - 1) with B ~ Beta(k, k).  The same law arises as the median
of 2k - 1 uniforms on [-delta, delta]; a seeded sample confirms it.
"""

import numpy as np

from limitlab import (Distribution, RngSeed, dkw_check, kernel_bounds, make_smoother,
                      modulus_delta, sample_median_of_uniforms, smoothed_cdf_curve)


def main():
    for k in (2, 3):
        K = make_smoother(1.0, k)
        b = kernel_bounds(K)
        print(f"{K.literal}: F(0.5) = {K.derivative(0.5):.9f}, bounds {b}")
        print(f"   gap keeping the top derivative within 0.75: {modulus_delta(K, 0.75):.4f}")

    K = make_smoother(1.0, 3)
    curve = smoothed_cdf_curve(K, Distribution.rademacher())
    print("\nsmoothed Rademacher CDF, breakpoints", curve.breakpoints.tolist())
    for t in np.linspace(-2.5, 2.5, 11):
        print(f"  t={t:+.1f}  F_W+X = {curve(t):.6f}  step = {Distribution.rademacher().cdf(t):.1f}")
    slope = curve.pp.derivative().sup_abs()[0]
    print(f"max slope {slope:.6f} never exceeds m1 = {K.bounds.m1}")

    print("\nmedian-of-uniforms samplers against the closed form (m = 1e5):")
    for k in (2, 3):
        S = make_smoother(0.5, k)
        r = dkw_check(sample_median_of_uniforms(S, 10**5, RngSeed(31, k)), S.distribution)
        print(f"  median of {2 * k - 1}: KS {r.ks:.4f} vs band {r.bound:.4f} -> {'ok' if r.passed else 'FAIL'}")


if __name__ == "__main__":
    main()
