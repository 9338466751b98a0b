"""Smoothed distribution functions ``F_{W+X}(t) = E[F_W(t - X)]``.

Two engines, chosen by the kind of ``X``:

* exact: atomic and piecewise-polynomial laws are convolved with the kernel
  density by polynomial algebra, giving a piecewise-polynomial CDF;
* normal: for ``X = loc + sigma N`` the kernel CDF is a polynomial on its
  support, so ``E[F_W(t - X)]`` reduces to truncated normal moments, which
  obey a three-term recursion (evaluated with a running rounding-error bound);
* quadrature: other closed-form laws (and polynomial laws past the degree cap)
  use ``F_{W+X}(t) = int F_X(t - w) f_W(w) dw`` over the kernel support with
  certified adaptive Gauss-Legendre quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P

from .distcore import Distribution, convolve_pair
from .errors import CertificationError, PreconditionError, UnsupportedKindError
from .normal import normal_cdf, normal_pdf
from .quadrature import integrate_batch
from .smoothkernel import kernel_derivative
from .supnorm import DEFAULT_GRID, DEFAULT_TOL, SupDistance, certified_sup

DEFAULT_QUAD_TOL = 1e-11
# Starting grid for branch-and-bound over quadrature-evaluated curves; each
# evaluation costs a full quadrature, and bisection does the rest.
QUAD_SEARCH_GRID = 512
MAX_CERT_ERROR = 1e-9
GAUSS_CERT_ERROR = 1e-11
GAUSS_MIN_WIDTH = 0.5  # kernel width over sigma below which quadrature is used
_EPS = np.finfo(float).eps


def _check_tol(tol):
    if not tol <= MAX_CERT_ERROR:
        raise PreconditionError(f"quadrature tolerance {tol!r} is looser than {MAX_CERT_ERROR}")


def _quad_smoothed(kernel, base, ts, tol, upper=False):
    """``F_{W+X}(t)`` (or its complement when ``upper``) by quadrature over ``w``."""
    ts = np.asarray(ts, dtype=float)
    flat = np.atleast_1d(ts).ravel()
    dens = kernel.local_poly(1)
    delta = kernel.delta
    tail = base.sf if upper else base.cdf

    def integrand(w, t):
        return tail(t - w) * P.polyval(w + delta, dens)

    knots = base.knots
    breaks = flat[:, None] - knots[None, :] if knots.size else None
    panels = 1
    if base.analytic is not None:
        # resolve the steep part of F_X near w = t from the first sweep
        panels = int(min(64, max(1, math.ceil(2.0 * delta / abs(base.analytic.scale)))))
    vals, _ = integrate_batch(integrand, flat, -delta, delta, breaks=breaks, tol=tol,
                              initial_panels=panels)
    return float(vals[0]) if ts.ndim == 0 else vals.reshape(ts.shape)


def _gauss_closed(kernel, loc, sigma, ts):
    """``F_{W + loc + sigma N}(t)`` and a bound on its rounding error.

    With ``y`` the normal variable, ``F_W = 1`` for ``y <= a`` and
    ``F_W = c(sigma (b - y))`` on ``[a, b]`` (``c`` the kernel CDF in
    ``w + delta``), so the value is ``Phi(a) + sum_k c_k sigma^k J_k`` where
    ``J_k = int_a^b (b - y)^k phi(y) dy`` satisfies
    ``J_{k+1} = b J_k + k J_{k-1} - (b - a)^k phi(a) + [k = 0] phi(b)``.
    """
    ts = np.asarray(ts, dtype=float)
    delta = kernel.delta
    c = kernel.local_poly(0) * sigma ** np.arange(kernel.order * 2)
    a = (ts - loc - delta) / sigma
    b = (ts - loc + delta) / sigma
    width = 2.0 * delta / sigma
    pa, pb = normal_pdf(a), normal_pdf(b)
    pos = a > 0
    # Phi(b) - Phi(a) from whichever tail keeps the absolute error small
    hi_tail = np.where(pos, normal_cdf(-a), normal_cdf(b))
    lo_tail = np.where(pos, normal_cdf(-b), normal_cdf(a))
    j0 = hi_tail - lo_tail
    J = [j0, b * j0 - pa + pb]
    # running forward-error bounds: inherited error plus one rounding per operation
    e0 = 4 * _EPS * (hi_tail + lo_tail)
    E = [e0, np.abs(b) * e0 + 2 * _EPS * (np.abs(b * j0) + pa + pb + np.abs(J[1]))]
    for k in range(1, c.size - 1):
        J.append(b * J[k] + k * J[k - 1] - width**k * pa)
        E.append(np.abs(b) * E[k] + k * E[k - 1]
                 + 3 * _EPS * (np.abs(b * J[k]) + k * np.abs(J[k - 1]) + width**k * pa))
    terms = [ck * Jk for ck, Jk in zip(c, J)]
    val = normal_cdf(a) + sum(terms)
    err = (2 * _EPS + sum(abs(ck) * Ek for ck, Ek in zip(c, E))
           + c.size * _EPS * sum(np.abs(tk) for tk in terms))
    return np.clip(val, 0.0, 1.0), err


def _gauss_eval(kernel, law, ts, cert, upper=False):
    # the kernel is symmetric, so 1 - F_{W+X}(t) = F_{W-X}(-t)
    ts = np.asarray(ts, dtype=float)
    if upper:
        vals, err = _gauss_closed(kernel, -law.loc, law.scale, -ts)
    else:
        vals, err = _gauss_closed(kernel, law.loc, law.scale, ts)
    worst = float(np.max(err))
    if worst > cert:
        raise CertificationError(
            f"closed-form normal smoothing error bound {worst:.3g} exceeds {cert:.3g}",
            achieved=worst)
    return float(vals) if ts.ndim == 0 else vals


@dataclass(frozen=True, eq=False)
class SmoothedCdf:
    """Distribution function of ``W + X``.

    On the exact path ``dist`` holds the law of ``W + X`` and ``cert_error``
    is 0; otherwise evaluations go through quadrature, each certified to
    ``cert_error``.
    """

    kernel: object
    base: Distribution
    dist: Optional[Distribution]
    cert_error: float = 0.0

    @property
    def exact(self):
        return self.dist is not None

    @property
    def _gaussian(self):
        """Closed form applies; it loses accuracy once the kernel is narrow
        against ``sigma``, where quadrature converges in a single panel anyway."""
        law = self.base.analytic
        return (law is not None and law.family == "normal"
                and 2.0 * self.kernel.delta >= GAUSS_MIN_WIDTH * law.scale)

    def __call__(self, t):
        if self.dist is not None:
            return self.dist.cdf(t)
        if self._gaussian:
            return _gauss_eval(self.kernel, self.base.analytic, t, self.cert_error)
        return _quad_smoothed(self.kernel, self.base, t, self.cert_error)

    def sf(self, t):
        if self.dist is not None:
            return self.dist.sf(t)
        if self._gaussian:
            return _gauss_eval(self.kernel, self.base.analytic, t, self.cert_error, upper=True)
        return _quad_smoothed(self.kernel, self.base, t, self.cert_error, upper=True)

    @property
    def pp(self):
        if self.dist is None:
            raise UnsupportedKindError("quadrature-path curves have no polynomial form")
        return self.dist.cdf_pp

    @property
    def breakpoints(self):
        if self.dist is not None:
            return self.dist.knots
        d = self.kernel.delta
        k = self.base.knots
        return np.unique(np.concatenate([k - d, k + d]))

    @property
    def lipschitz(self):
        """Bound on the density of ``W + X``: smoothing never exceeds the kernel's peak."""
        return self.kernel.bounds.m1

    def range_for(self):
        lo, hi = self.base.range_for()
        return lo - self.kernel.delta, hi + self.kernel.delta


def smoothed_cdf_curve(w_kernel, x, tol=DEFAULT_QUAD_TOL):
    """Build ``F_{W+X}`` once for repeated evaluation."""
    if x.is_exact:
        try:
            return SmoothedCdf(w_kernel, x, convolve_pair(x, w_kernel.distribution))
        except UnsupportedKindError:
            if x.locs.size:
                raise
    _check_tol(tol)
    curve = SmoothedCdf(w_kernel, x, None, tol)
    if curve._gaussian:
        return SmoothedCdf(w_kernel, x, None, min(tol, GAUSS_CERT_ERROR))
    return curve


def smoothed_cdf_at(w_kernel, x, t, tol=DEFAULT_QUAD_TOL):
    """``F_{W+X}(t) = E[F_W(t - X)]``, vectorized over ``t``."""
    if x.is_exact and not x.segments:
        ta = np.asarray(t, dtype=float)
        vals = kernel_derivative(w_kernel, ta[..., None] - x.locs, 0) @ x.masses
        return float(vals) if ta.ndim == 0 else vals
    return smoothed_cdf_curve(w_kernel, x, tol)(t)


def gauss_smoothed_cdf(w_kernel, sigma, t, tol=DEFAULT_QUAD_TOL):
    """``F_{W + sigma N}(t)`` by certified quadrature of ``Phi((t - w)/sigma)``."""
    if not sigma > 0:
        raise PreconditionError("sigma must be positive")
    _check_tol(tol)
    return _quad_smoothed(w_kernel, Distribution.normal(0.0, sigma), t, tol)


def smoothed_distance(a, b, tol=DEFAULT_TOL):
    """Certified ``sup_t |a(t) - b(t)|`` for two smoothed CDFs."""
    if a.exact and b.exact:
        v, t = (a.pp - b.pp).sup_abs()
        return SupDistance(v, t, 0.0)
    lo = min(a.range_for()[0], b.range_for()[0])
    hi = max(a.range_for()[1], b.range_for()[1])
    knots = np.concatenate([[lo, hi], a.breakpoints, b.breakpoints])
    knots = knots[(knots >= lo) & (knots <= hi)]
    tail = max(a(lo), b(lo), a.sf(hi), b.sf(hi))
    slow = any(c.dist is None and not c._gaussian for c in (a, b))
    grid = QUAD_SEARCH_GRID if slow else DEFAULT_GRID
    return certified_sup(lambda t: a(t) - b(t), knots, max(a.lipschitz, b.lipschitz),
                         tail_bound=tail, value_error=a.cert_error + b.cert_error, tol=tol,
                         grid=grid)
