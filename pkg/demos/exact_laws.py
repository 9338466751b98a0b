"""Exact distribution arithmetic: binomial sums and their distance to the normal.

Sums of Rademacher signs are built atom by atom, rescaled by sqrt(n), and
compared with Phi.  The distance shrinks roughly like 1/sqrt(n).
"""

import math

from limitlab import Distribution, affine_transform, moment_summary, standardize, sum_iid, sup_distance
from limitlab.normal import INV_SQRT_2PI


def main():
    rad = Distribution.rademacher()
    print("S_2 atoms:", dict(zip(sum_iid(rad, 2).locs.tolist(), sum_iid(rad, 2).masses.tolist())))

    # a two-point law on {1, 5} standardizes to the Rademacher law
    z = standardize(Distribution.from_atoms([1.0, 5.0], [0.5, 0.5]), "clt")
    print("standardized {1, 5}:", z.locs.tolist(), moment_summary(z))

    normal = Distribution.normal()
    print("\n  n   sup|F_Sn - Phi|   argmax")
    prev = None
    for n in (4, 16, 64, 256, 1024):
        s = affine_transform(sum_iid(rad, n), 1 / math.sqrt(n), 0.0)
        r = sup_distance(s, normal, lipschitz_bound=INV_SQRT_2PI)
        ratio = "" if prev is None else f"   ratio {r.value / prev:.3f}"
        print(f"{n:5d}   {r.value:.10f}   {r.argmax:+.4f}{ratio}")
        prev = r.value

    # a continuous law: Irwin-Hall sums of uniforms are piecewise polynomials
    u = standardize(Distribution.uniform(0.0, 1.0), "clt")
    for n in (2, 4, 8):
        s = affine_transform(sum_iid(u, n), 1 / math.sqrt(n), 0.0)
        r = sup_distance(s, normal, lipschitz_bound=max(INV_SQRT_2PI, s.max_density()))
        print(f"uniform n={n}: {len(s.segments)} pieces, distance {r.value:.3e} (+{r.enclosure:.1e})")


if __name__ == "__main__":
    main()
