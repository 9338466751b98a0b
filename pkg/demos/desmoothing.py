"""From smoothed CDFs back to the real ones.

If the smoothed CDFs of S and T are within eta, the unsmoothed CDF of S is
squeezed between shifted copies of T's CDF.  Each link of both chains is
printed for one instance.
"""

import math

from limitlab import Distribution, affine_transform, make_smoother, sandwich_check, sum_iid


def main():
    rad = Distribution.rademacher()
    s4 = affine_transform(sum_iid(rad, 4), 0.5, 0.0)
    normal = Distribution.normal()
    for delta in (0.1, 0.25, 0.5):
        rep = sandwich_check(s4, normal, make_smoother(delta, 3), 0.0, 4)
        print(f"delta={delta}: eta={rep.eta:.4f}, all hold: {rep.holds}")
        for name, lhs, rhs, ok in rep.inequalities:
            print(f"    {name:34s} {lhs:.6f} <= {rhs:.6f}  {'ok' if ok else 'FAIL'}")

    # the resulting two-sided bound on |F_S(t) - F_T(t)|
    K = make_smoother(0.25, 3)
    rep = sandwich_check(s4, normal, K, 0.3, 4)
    slack = rep.eta + 2 * K.delta / math.sqrt(2 * math.pi)
    print(f"\n|F_S(0.3) - Phi(0.3)| = {abs(s4.cdf(0.3) - normal.cdf(0.3)):.4f} <= {slack:.4f}")


if __name__ == "__main__":
    main()
