"""Certified sup-norm search for functions known only by evaluation."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .piecewise import ARGMAX_TIE

DEFAULT_GRID = 4096
MAX_EVALS = 2**20
DEFAULT_TOL = 1e-9


class SupDistance(NamedTuple):
    """``value <= sup <= value + enclosure``; ``argmax`` is where ``value`` was seen."""

    value: float
    argmax: float
    enclosure: float

    @property
    def upper(self):
        return self.value + self.enclosure


def certified_sup(h, knots, lipschitz, *, h_left=None, tail_bound=0.0, value_error=0.0,
                  tol=DEFAULT_TOL, grid=DEFAULT_GRID, max_evals=MAX_EVALS):
    """Branch-and-bound enclosure of ``sup |h|`` over ``[knots[0], knots[-1]]``.

    Between consecutive ``knots`` ``h`` must be Lipschitz with constant
    ``lipschitz``; jumps are allowed at knots, where ``h_left`` supplies the
    left limits.  On an interval with end values ``A``, ``B`` and width ``w``,
    ``|h| <= (A + B + L*w) / 2``; intervals whose bound can still beat the
    incumbent by more than ``tol`` are bisected.

    ``tail_bound`` bounds ``|h|`` outside the knot range.  ``value_error``
    bounds the absolute error of each evaluation of ``h`` and widens the
    enclosure on both sides.
    """
    knots = np.unique(np.asarray(knots, dtype=float))
    lo, hi = knots[0], knots[-1]
    pts = np.union1d(knots, np.linspace(lo, hi, grid)) if hi > lo else knots
    vr = np.abs(np.asarray(h(pts), dtype=float))
    vl = vr if h_left is None else np.abs(np.asarray(h_left(pts), dtype=float))
    evals = 2 * pts.size

    allv = np.concatenate([vr, vl])
    allt = np.concatenate([pts, pts])
    best = float(allv.max())
    argmax = float(allt[allv >= best - ARGMAX_TIE].min())

    a, b = pts[:-1], pts[1:]
    A, B = vr[:-1], vl[1:]
    L = float(lipschitz)
    ub_max = best
    while a.size:
        ub = 0.5 * (A + B + L * (b - a))
        live = ub > best + tol
        if not np.any(live):
            ub_max = max(best, float(ub.max()))
            break
        a, b, A, B = a[live], b[live], A[live], B[live]
        if evals + a.size > max_evals or np.all(b - a <= 4 * np.spacing(np.maximum(abs(a), abs(b)))):
            ub_max = float(ub[live].max())
            break
        m = 0.5 * (a + b)
        vm = np.abs(np.asarray(h(m), dtype=float))
        evals += m.size
        k = int(np.argmax(vm))
        if vm[k] > best + ARGMAX_TIE:
            best = float(vm[k])
            argmax = float(m[vm >= best - ARGMAX_TIE].min())
        else:
            near = vm >= best - ARGMAX_TIE
            if np.any(near):
                argmax = min(argmax, float(m[near].min()))
        a, b = np.concatenate([a, m]), np.concatenate([m, b])
        A, B = np.concatenate([A, vm]), np.concatenate([vm, B])
    enclosure = max(ub_max - best, 0.0, float(tail_bound) - best)
    value = max(best - value_error, 0.0)
    return SupDistance(value, argmax, enclosure + 2.0 * value_error)
