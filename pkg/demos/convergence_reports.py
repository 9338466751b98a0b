"""Convergence records for the central limit theorem and the weak law.

Writes CSV and SVG reports into a scratch directory and prints the paths.
Exact laws give certified values; the exponential law falls back to
seeded sampling with a DKW band.
"""

import sys
import tempfile
from pathlib import Path

from limitlab import Distribution, clt_convergence, in_probability_bridge, wlln_convergence
from limitlab.lindeberg import suite_laws
from limitlab.reports import emit_chart, records_to_csv, write_atomic
from limitlab.theorems import exact_scaled_sum


def main(out=None):
    out = Path(out or tempfile.mkdtemp(prefix="limitlab-demo-"))
    out.mkdir(parents=True, exist_ok=True)

    clt = []
    for z in suite_laws("clt"):
        clt += clt_convergence(z, [4, 16, 64])
    clt += clt_convergence(Distribution.exp1(), [4, 16, 64], samples=50_000)
    for r in clt:
        print(f"clt  {r.dist:34s} n={r.n:3d} {r.value:.5f} +{r.enclosure:.1e} ({r.method})")

    wlln = []
    for z in suite_laws("wlln")[:2]:
        wlln += wlln_convergence(z, [4, 16, 64, 256], ts=[-0.5, 0.5])
    for r in wlln[:8]:
        print(f"wlln {r.dist:34s} n={r.n:3d} t={r.eval_point:+.1f} {r.value:.3e}")

    rad = Distribution.rademacher()
    for n in (16, 100, 400):
        b = in_probability_bridge(exact_scaled_sum(rad, n, 1 / n), 0.25)
        print(f"Pr[|S_{n}| > 0.25] <= {b:.3e}")

    write_atomic(out / "clt.csv", records_to_csv(clt))
    write_atomic(out / "wlln.csv", records_to_csv(wlln))
    emit_chart(clt, out / "clt.svg")
    emit_chart(wlln, out / "wlln.svg")
    print("reports written to", out)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else None)
