"""Beta smoothing kernels ``W = delta * (2B - 1)`` with ``B ~ Beta(k, k)``.

For ``k = 2`` (median of three uniforms) the CDF is ``3u^2 - 2u^3``; for
``k = 3`` (median of five) it is ``10u^3 - 15u^4 + 6u^5``, with
``u = (w/delta + 1) / 2``.  Derivatives follow from the chain rule, with
``du/dw = 1 / (2 delta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P

from .distcore import Distribution
from .errors import PreconditionError
from .piecewise import PiecewisePoly, real_roots_in, scale_argument

# CDF of Beta(k, k) on [0, 1], ascending powers of u.
BETA_CDF = {
    2: np.array([0.0, 0.0, 3.0, -2.0]),
    3: np.array([0.0, 0.0, 0.0, 10.0, -15.0, 6.0]),
}


def _sup_abs_on_unit(c):
    """max |c(u)| over [0, 1], from endpoints and critical points."""
    u = np.concatenate([[0.0, 1.0], real_roots_in(P.polyder(c), 1.0)])
    return float(np.max(np.abs(P.polyval(u, c))))


@dataclass(frozen=True)
class KernelBounds:
    """Sup-norm constants of the kernel CDF's derivatives.

    ``m1 = sup|F'|``; ``m2 = sup|F''|`` (order 3 only).  ``lip1`` is the
    Lipschitz constant of ``F'`` (order 2), ``lip2`` that of ``F''`` (order 3).
    """

    m1: float
    m2: Optional[float] = None
    lip1: Optional[float] = None
    lip2: Optional[float] = None


@dataclass(frozen=True)
class BetaSmoother:
    delta: float
    order: int

    def __post_init__(self):
        if self.order not in BETA_CDF:
            raise PreconditionError(f"kernel order must be 2 or 3, got {self.order!r}")
        if not (math.isfinite(self.delta) and self.delta > 0):
            raise PreconditionError(f"kernel half-width must be positive, got {self.delta!r}")

    @property
    def support(self):
        return (-self.delta, self.delta)

    @property
    def literal(self):
        return f"beta:{self.order},{self.delta:g}"

    def _unit_poly(self, d):
        c = BETA_CDF[self.order]
        for _ in range(d):
            c = P.polyder(c)
        return c

    def derivative(self, w, d=0):
        return kernel_derivative(self, w, d)

    def local_poly(self, d=0):
        """``F_W^(d)`` on the support as a polynomial in ``w + delta``."""
        h = 2.0 * self.delta
        return scale_argument(self._unit_poly(d), 1.0 / h) / h**d

    def pp(self, d=0):
        """``F_W^(d)`` as a :class:`PiecewisePoly` over the whole line."""
        right = 1.0 if d == 0 else 0.0
        return PiecewisePoly([-self.delta, self.delta], [self.local_poly(d)], 0.0, right)

    @cached_property
    def bounds(self):
        return kernel_bounds(self)

    @cached_property
    def distribution(self):
        return as_distribution(self)


def make_smoother(delta, order):
    return BetaSmoother(float(delta), int(order))


def kernel_derivative(s, w, d=0):
    """``d``-th derivative of the kernel CDF at ``w`` (vectorized over ``w``)."""
    if d not in (0, 1, 2):
        raise PreconditionError(f"derivative order must be 0, 1 or 2, got {d!r}")
    if d >= s.order:
        raise PreconditionError(f"order-{s.order} kernel has no continuous derivative {d}")
    wa = np.asarray(w, dtype=float)
    u = (wa / s.delta + 1.0) * 0.5
    inside = P.polyval(np.clip(u, 0.0, 1.0), s._unit_poly(d)) / (2.0 * s.delta) ** d
    outside_right = 1.0 if d == 0 else 0.0
    out = np.where(u <= 0.0, 0.0, np.where(u >= 1.0, outside_right, inside))
    return float(out) if wa.ndim == 0 else out


def kernel_bounds(s):
    """Derivative bounds from closed-form extrema of the Beta polynomials."""
    h = 2.0 * s.delta
    sups = [_sup_abs_on_unit(s._unit_poly(d)) / h**d for d in range(1, s.order + 1)]
    if s.order == 3:
        return KernelBounds(m1=sups[0], m2=sups[1], lip2=sups[2])
    return KernelBounds(m1=sups[0], lip1=sups[1])


def modulus_delta(s, eps):
    """Gap ``g`` with ``|v - w| <= g`` implying the top continuous derivative moves by ``<= eps``."""
    if not eps > 0:
        raise PreconditionError("eps must be positive")
    b = s.bounds
    lip = b.lip2 if s.order == 3 else b.lip1
    return eps / lip


def as_distribution(s):
    """The kernel law as a polynomial-density :class:`Distribution` on ``[-delta, delta]``."""
    return Distribution(segments=[(-s.delta, s.delta, s.local_poly(1))], label=s.literal)
