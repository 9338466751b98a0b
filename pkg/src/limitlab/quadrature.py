"""Adaptive panel-splitting Gauss-Legendre quadrature with certified error.

Each panel is integrated with an ``order``-point rule and a ``2*order``-point
rule; their difference is the panel error estimate and the higher-order value
is kept.  Panels whose estimate exceeds their share of the tolerance are
bisected.  The batched driver integrates ``f(w, t)`` over ``w`` for many
``t`` at once, each ``t`` refining independently.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .errors import CertificationError

DEFAULT_ORDER = 20
MAX_LEVEL = 14  # at most 2**14 panels per integral
MAX_ITEMS = 2**20  # live (t, panel) pairs per sweep


@lru_cache(maxsize=None)
def gauss_legendre(n):
    x, w = roots_legendre(n)
    return x, w


def integrate_batch(f, ts, a, b, *, breaks=None, tol=1e-11, order=DEFAULT_ORDER,
                    initial_panels=1, max_level=MAX_LEVEL, max_items=MAX_ITEMS):
    """Integrate ``f(w, t)`` over ``w`` in ``[a, b]`` for every ``t`` in ``ts``.

    ``f`` is called with broadcastable arrays ``w`` of shape (k, nodes) and
    ``t`` of shape (k, 1).  ``breaks`` is an optional (len(ts), K) array of
    per-``t`` split points (NaN entries ignored) where the integrand may have
    a kink or jump.  Returns ``(values, error_bounds)``.

    Raises :class:`CertificationError` if some integral cannot reach ``tol``.
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    T = ts.size
    if not b > a:
        return np.zeros(T), np.zeros(T)
    x1, w1 = gauss_legendre(order)
    x2, w2 = gauss_legendre(2 * order)
    span = b - a

    base = np.linspace(a, b, int(initial_panels) + 1)
    pts = np.broadcast_to(base, (T, base.size))
    if breaks is not None:
        extra = np.array(np.broadcast_to(np.asarray(breaks, dtype=float), (T, np.shape(breaks)[-1])))
        extra[~((extra > a) & (extra < b))] = np.nan
        pts = np.sort(np.concatenate([pts, extra], axis=1), axis=1)  # NaNs sort last
    lo2, hi2 = pts[:, :-1], pts[:, 1:]
    use = np.isfinite(hi2) & (hi2 > lo2)
    owner = np.broadcast_to(np.arange(T)[:, None], lo2.shape)[use]
    lo = lo2[use]
    hi = hi2[use]

    values = np.zeros(T)
    errors = np.zeros(T)
    level = 0
    while owner.size:
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        tcol = ts[owner][:, None]
        f1 = f(mid[:, None] + half[:, None] * x1, tcol)
        f2 = f(mid[:, None] + half[:, None] * x2, tcol)
        i1 = half * (f1 @ w1)
        i2 = half * (f2 @ w2)
        err = np.abs(i2 - i1)
        ok = err <= tol * (hi - lo) / span
        np.add.at(values, owner[ok], i2[ok])
        np.add.at(errors, owner[ok], err[ok])
        if np.all(ok):
            break
        bad = ~ok
        if level >= max_level or 2 * np.count_nonzero(bad) > max_items:
            pending = errors.copy()
            np.add.at(pending, owner[bad], err[bad])
            achieved = float(pending.max())
            raise CertificationError(
                f"quadrature could not certify tolerance {tol:.3g} after {level} "
                f"refinements (achieved {achieved:.3g})", achieved=achieved)
        o, l, h, m = owner[bad], lo[bad], hi[bad], mid[bad]
        owner = np.concatenate([o, o])
        lo = np.concatenate([l, m])
        hi = np.concatenate([m, h])
        level += 1
    return values, errors


def integrate(f, a, b, *, tol=1e-11, order=DEFAULT_ORDER, breaks=(), max_level=MAX_LEVEL):
    """Scalar convenience wrapper: integrate ``f(w)`` over ``[a, b]``."""
    br = np.asarray([list(breaks)], dtype=float) if len(breaks) else None
    v, e = integrate_batch(lambda w, t: f(w), [0.0], a, b, breaks=br, tol=tol,
                           order=order, max_level=max_level)
    return float(v[0]), float(e[0])
