"""Swapping summands one at a time.

For smoothed CDFs, replacing all n summands X by Y moves the CDF by at most
n times the single-swap distance.  The Taylor defect measures how fast that
single swap shrinks; n * defect tending to 0 is what makes the sum converge.
"""


from limitlab import Distribution, defect_curve, make_smoother, pair_defect, taylor_defect
from limitlab.lindeberg import swap_matrix, run_cells, suite_laws


def main():
    cells = swap_matrix(kernels=[make_smoother(0.5, 3)], ns=(2, 8))
    print("swap bound, kernel beta:3,0.5")
    for cell, r in zip(cells, run_cells(cells)):
        x, y = cell.laws()
        print(f"  {x.label:32s} vs {y.label or 'normal':>12s} n={cell.n}: "
              f"lhs {r.lhs:.3e} <= rhs {r.rhs:.3e}  {r.verdict}")

    K3, K2 = make_smoother(1.0, 3), make_smoother(1.0, 2)
    print("\nn * defect along the ladder")
    for mode, K in (("clt", K3), ("wlln", K2)):
        for z in suite_laws(mode)[:2]:
            c = defect_curve(K, z, [4, 16, 64, 256], mode)
            print(f"  {mode:4s} {z.label:26s}", "  ".join(f"{v:.4f}" for v in c.scaled))

    rad, unif = suite_laws("clt")[:2]
    n = 16
    print(f"\npair defect at n={n}: {pair_defect(K3, rad, unif, n):.3e} <= "
          f"{taylor_defect(K3, rad, n) + taylor_defect(K3, unif, n):.3e}")
    print(f"against the normal: n=16 {16 * pair_defect(K3, rad, Distribution.normal(), 16):.4f}, "
          f"n=64 {64 * pair_defect(K3, rad, Distribution.normal(), 64):.4f} (scaled by n)")


if __name__ == "__main__":
    main()
