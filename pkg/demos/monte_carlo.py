"""Seeded sampling as an independent check on the exact engines.

Every draw is keyed by (seed, stream, batch), so the numbers below are the
same on every machine and for any LIMITLAB_THREADS setting.
"""

import math

from limitlab import (Distribution, RngSeed, dkw_check, sample_batch, simulate_scaled_sum,
                      stream_id, sum_iid)
from limitlab.lindeberg import suite_laws
from limitlab.montecarlo import dkw_bound, ks_distance
from limitlab.distcore import affine_transform


def main():
    m = 10**5
    print(f"DKW band for m={m}, alpha=0.001: {dkw_bound(m):.6f}")
    for z in suite_laws("clt"):
        r = dkw_check(sample_batch(z, m, RngSeed(11, stream_id("demo", z.label))), z)
        print(f"  {z.label:34s} KS {r.ks:.4f}  {'pass' if r.passed else 'fail'}")

    rad = Distribution.rademacher()
    e = simulate_scaled_sum(rad, 100, "clt", m, RngSeed(2024))
    exact = affine_transform(sum_iid(rad, 100), 0.1, 0.0)
    print(f"\nS_100 sample vs exact binomial law: {dkw_check(e, exact)}")
    print(f"S_100 sample vs Phi: KS {ks_distance(e, Distribution.normal()):.4f} "
          f"(exact distance 0.0398 plus band {dkw_bound(m):.4f})")

    e = simulate_scaled_sum(Distribution.exp1(), 64, "clt", m, RngSeed(5))
    print(f"exponential n=64 vs Phi: KS {ks_distance(e, Distribution.normal()):.4f}, "
          f"Berry-Esseen scale {2 / math.sqrt(64):.3f}")


if __name__ == "__main__":
    main()
