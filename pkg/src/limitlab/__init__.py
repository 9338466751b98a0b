"""Smoothing-and-swapping laboratory for the weak law and the central limit theorem.

Exact distribution-function arithmetic on atoms and piecewise-polynomial
densities, Beta smoothing kernels, swap bounds and Taylor defects, and
theorem-level convergence experiments with certified error enclosures.
"""

from .convolve import (SmoothedCdf, gauss_smoothed_cdf, smoothed_cdf_at, smoothed_cdf_curve,
                       smoothed_distance)
from .distcore import (Distribution, Kind, MomentSummary, affine_transform, cdf_at, convolve_pair,
                       moment_summary, standardize, sum_iid, sup_distance, tail_moment)
from .errors import (AtomCapExceeded, CertificationError, DegenerateInputError, LimitlabError,
                     PreconditionError, UncertifiableError, UnsupportedKindError)
from .lindeberg import (DefectCurve, SwapReport, defect_curve, lemma4_check, pair_defect,
                        taylor_defect)
from .literals import LiteralError, parse_distribution, parse_kernel
from .montecarlo import (EmpiricalCdf, RngSeed, dkw_check, sample_batch, sample_median_of_uniforms,
                         simulate_scaled_sum, stream_id)
from .normal import normal_cdf
from .smoothkernel import (BetaSmoother, KernelBounds, as_distribution, kernel_bounds,
                           kernel_derivative, make_smoother, modulus_delta)
from .supnorm import SupDistance
from .theorems import (ConvergenceRecord, SandwichReport, clt_convergence, in_probability_bridge,
                       normal_closure_check, sandwich_check, wlln_convergence)

__version__ = "0.1.0"
