"""Standard normal distribution function.

Values come from the complementary error function evaluated on ``|t|`` only,
so ``normal_cdf(-t) == 1 - normal_cdf(t)`` holds by construction.
"""

import math

import numpy as np
from scipy import special

SQRT_2PI = math.sqrt(2.0 * math.pi)
INV_SQRT_2PI = 1.0 / SQRT_2PI
_SQRT1_2 = math.sqrt(0.5)


def _scalar_or_array(x, like):
    return float(x) if np.ndim(like) == 0 else x


def normal_cdf(t):
    """Phi(t) for scalar or array ``t`` (absolute error below 1e-15)."""
    ta = np.asarray(t, dtype=float)
    q = 0.5 * special.erfc(np.abs(ta) * _SQRT1_2)
    out = np.where(ta >= 0, 1.0 - q, q)
    return _scalar_or_array(out, t)


def normal_sf(t):
    """1 - Phi(t) without cancellation for large positive ``t``."""
    return normal_cdf(-np.asarray(t, dtype=float)) if np.ndim(t) else normal_cdf(-float(t))


def normal_pdf(t):
    ta = np.asarray(t, dtype=float)
    return _scalar_or_array(np.exp(-0.5 * ta * ta) * INV_SQRT_2PI, t)


def normal_ppf(q):
    qa = np.asarray(q, dtype=float)
    return _scalar_or_array(special.ndtri(qa), q)
