"""Swap bounds and Taylor defects for smoothed sums.

``lemma4_check`` compares the smoothed laws of ``S_n = X_1 + ... + X_n`` and
``T_n = Y_1 + ... + Y_n`` against ``n`` times a single-summand swap.
``taylor_defect`` measures how far ``F_{W+X}`` is from its expansion
``F_W - F_W''/(2n)`` (clt, ``X = Z/sqrt(n)``) or ``F_W`` (wlln, ``X = Z/n``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .convolve import DEFAULT_QUAD_TOL, smoothed_cdf_curve, smoothed_distance
from .distcore import Distribution, affine_transform, moment_summary, standardize, sum_iid
from .errors import PreconditionError
from .parallel import pmap
from .smoothkernel import BetaSmoother, make_smoother
from .supnorm import SupDistance, certified_sup

MOMENT_TOL = 1e-9
MODES = ("clt", "wlln")


def _label(d):
    return d.label if d.label else repr(d)


@dataclass(frozen=True)
class SwapReport:
    kernel: BetaSmoother
    x_law: Distribution
    y_law: Distribution
    n: int
    lhs: float
    rhs: float
    lhs_enclosure: float
    rhs_enclosure: float

    @property
    def verdict(self):
        return self.lhs <= self.rhs + self.lhs_enclosure + self.rhs_enclosure

    @property
    def exact(self):
        return self.lhs_enclosure == 0.0 and self.rhs_enclosure == 0.0

    def to_dict(self):
        return {
            "kernel": self.kernel.literal,
            "x_law": _label(self.x_law),
            "y_law": _label(self.y_law),
            "n": self.n,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "lhs_enclosure": self.lhs_enclosure,
            "rhs_enclosure": self.rhs_enclosure,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class DefectCurve:
    mode: str
    kernel: BetaSmoother
    z_law: Distribution
    points: List[Tuple[int, float, float]] = field(default_factory=list)

    @property
    def ns(self):
        return [p[0] for p in self.points]

    @property
    def scaled(self):
        """The ``n * defect`` column."""
        return [p[2] for p in self.points]

    def to_dict(self):
        return {
            "mode": self.mode,
            "kernel": self.kernel.literal,
            "z_law": _label(self.z_law),
            "points": [{"n": n, "defect": d, "n_times_defect": nd} for n, d, nd in self.points],
        }


def _check_n(n):
    if int(n) != n or n < 1:
        raise PreconditionError(f"n must be a positive integer, got {n!r}")
    return int(n)


def lemma4_check(kernel, x_law, y_law, n, tol=DEFAULT_QUAD_TOL):
    """Both sides of ``||F_{W+S_n} - F_{W+T_n}|| <= n ||F_{W+X} - F_{W+Y}||``."""
    n = _check_n(n)
    s_n, t_n = sum_iid(x_law, n), sum_iid(y_law, n)
    lhs = smoothed_distance(smoothed_cdf_curve(kernel, s_n, tol), smoothed_cdf_curve(kernel, t_n, tol))
    if n == 1:
        one = lhs
    else:
        one = smoothed_distance(smoothed_cdf_curve(kernel, x_law, tol),
                                smoothed_cdf_curve(kernel, y_law, tol))
    return SwapReport(kernel, x_law, y_law, n, lhs.value, n * one.value,
                      lhs.enclosure, n * one.enclosure)


def _check_moments(z, mode, kernel=None):
    if mode not in MODES:
        raise PreconditionError(f"mode must be 'clt' or 'wlln', got {mode!r}")
    m = moment_summary(z)
    if abs(m.mean) > MOMENT_TOL:
        raise PreconditionError(f"{_label(z)} has mean {m.mean!r}, expected 0")
    if mode == "clt":
        if abs(m.variance - 1.0) > MOMENT_TOL:
            raise PreconditionError(f"{_label(z)} has variance {m.variance!r}, expected 1")
        if kernel is not None and kernel.order != 3:
            raise PreconditionError("clt defects need an order-3 kernel (two smooth derivatives)")
    elif m.abs_mean > 1.0 + MOMENT_TOL:
        raise PreconditionError(f"{_label(z)} has E|Z| = {m.abs_mean!r}, expected at most 1")


def scaled_summand(z, n, mode, label=None):
    """``Z / sqrt(n)`` (clt) or ``Z / n`` (wlln)."""
    factor = 1.0 / math.sqrt(n) if mode == "clt" else 1.0 / n
    return affine_transform(z, factor, 0.0, label=label)


def taylor_defect_sup(kernel, z_law, n, mode="clt", tol=DEFAULT_QUAD_TOL):
    """Enclosure of ``sup_w |F_{W+X}(w) - F_W(w) - [clt] F_W''(w)/(2n)|``."""
    n = _check_n(n)
    _check_moments(z_law, mode, kernel)
    x = scaled_summand(z_law, n, mode)
    curve = smoothed_cdf_curve(kernel, x, tol)
    correction = 0.5 / n if mode == "clt" else 0.0
    if curve.exact:
        diff = curve.pp - kernel.pp(0)
        if correction:
            diff = diff - kernel.pp(2) * correction
        v, t = diff.sup_abs()
        return SupDistance(v, t, 0.0)

    def h(t):
        out = curve(t) - kernel.derivative(t, 0)
        if correction:
            out = out - correction * kernel.derivative(t, 2)
        return out

    b = kernel.bounds
    lip = b.m1 + (b.lip2 * correction if correction else 0.0)
    lo, hi = curve.range_for()
    knots = np.concatenate([[lo, hi, -kernel.delta, kernel.delta], curve.breakpoints])
    knots = knots[(knots >= lo) & (knots <= hi)]
    # outside [lo, hi] the kernel terms are exactly 0 or 1 and F''_W vanishes
    tail = max(curve(lo), curve.sf(hi))
    return certified_sup(h, knots, lip, tail_bound=tail, value_error=curve.cert_error)


def taylor_defect(kernel, z_law, n, mode="clt", tol=DEFAULT_QUAD_TOL):
    """Upper bound on the Taylor defect (certified enclosure folded in)."""
    return taylor_defect_sup(kernel, z_law, n, mode, tol).upper


def pair_defect(kernel, z_law, z2_law, n, mode="clt", tol=DEFAULT_QUAD_TOL):
    """Upper bound on ``||F_{W+X} - F_{W+X'}||`` for two scaled summand laws."""
    n = _check_n(n)
    _check_moments(z_law, mode, kernel)
    _check_moments(z2_law, mode, kernel)
    a = smoothed_cdf_curve(kernel, scaled_summand(z_law, n, mode), tol)
    b = smoothed_cdf_curve(kernel, scaled_summand(z2_law, n, mode), tol)
    return smoothed_distance(a, b).upper


def defect_curve(kernel, z_law, ns, mode="clt", tol=DEFAULT_QUAD_TOL):
    ns = [_check_n(n) for n in ns]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise PreconditionError("n ladder must be strictly increasing")
    pts = []
    for n in ns:
        d = taylor_defect(kernel, z_law, n, mode, tol)
        pts.append((n, d, n * d))
    return DefectCurve(mode, kernel, z_law, pts)


# The standard test matrix.

THREEPOINT_XS = (-2.0, 0.25, 1.0)
THREEPOINT_PS = (0.2, 0.5, 0.3)
THREEPOINT_LITERAL = "threepoint:-2,0.25,1,0.2,0.5,0.3"
MATRIX_KERNELS = tuple((k, d) for k in (2, 3) for d in (0.25, 0.5, 1.0))
MATRIX_NS = (1, 2, 4, 8)


def suite_laws(mode="clt"):
    """Rademacher, Uniform[-sqrt 3, sqrt 3] and an asymmetric three-point law, standardized."""
    r3 = math.sqrt(3.0)
    laws = [
        Distribution.rademacher(),
        Distribution.uniform(-r3, r3, label="uniform:-sqrt(3),sqrt(3)"),
        Distribution.three_point(THREEPOINT_XS, THREEPOINT_PS, label=THREEPOINT_LITERAL),
    ]
    return [standardize(z, mode) for z in laws]


@dataclass(frozen=True)
class MatrixCell:
    kernel: BetaSmoother
    z_law: Distribution
    y_kind: str  # "normal" (clt scaling) or "det0" (wlln scaling)
    n: int

    def laws(self):
        mode = "clt" if self.y_kind == "normal" else "wlln"
        tag = "/sqrt(n)" if mode == "clt" else "/n"
        x = scaled_summand(self.z_law, self.n, mode, label=self.z_law.label + tag)
        if mode == "clt":
            y = Distribution.normal(0.0, 1.0 / math.sqrt(self.n))
        else:
            y = Distribution.deterministic(0.0)
        return x, y

    def run(self, tol=DEFAULT_QUAD_TOL):
        x, y = self.laws()
        return lemma4_check(self.kernel, x, y, self.n, tol)


def swap_matrix(kernels=None, ns=MATRIX_NS, y_kinds=("normal", "det0")):
    """Cells of the kernel x law x partner x n matrix, in a fixed order."""
    kernels = [make_smoother(d, k) for k, d in MATRIX_KERNELS] if kernels is None else kernels
    laws = {"normal": suite_laws("clt"), "det0": suite_laws("wlln")}
    return [MatrixCell(K, z, y, n) for K in kernels for y in y_kinds
            for z in laws[y] for n in ns]


def run_cells(cells, tol=DEFAULT_QUAD_TOL, threads: Optional[int] = None):
    """Run matrix cells, in parallel across threads; results keep the input order."""
    return pmap(lambda c: c.run(tol), cells, threads)
