"""Exact arithmetic on mixed discrete/continuous distributions.

A :class:`Distribution` is a finite set of atoms plus a sorted list of
disjoint segments, each carrying a polynomial density, or else one of a small
whitelist of closed-form laws (the normal and the standardized exponential)
that are evaluated by formula.  Everything the smoothing arguments need
(uniform laws, Beta kernels, lattice laws and their i.i.d. sums) is exactly
representable, so distribution functions, moments and sup-distances are
computed by polynomial algebra rather than by quadrature.

Segment polynomials are stored in the local variable ``x - lo``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import (AtomCapExceeded, DegenerateInputError, PreconditionError,
                     UncertifiableError, UnsupportedKindError)
from .normal import INV_SQRT_2PI, normal_cdf, normal_pdf, normal_ppf
from .piecewise import PiecewisePoly, real_roots_in, taylor_shift, scale_argument
from .quadrature import integrate
from .supnorm import DEFAULT_TOL, SupDistance, certified_sup

MASS_TOL = 1e-12
NEGATIVE_DENSITY_TOL = 1e-9
ATOM_MERGE_RTOL = 1e-10
KNOT_SNAP_RTOL = 1e-12
DEGREE_CAP = 64
DEFAULT_ATOM_CAP = 10**6
# Quantile used to truncate unbounded supports when a finite range is needed.
TAIL_EPS = 1e-13
# Absolute error allowance for one closed-form CDF evaluation.
ANALYTIC_CDF_ERROR = 1e-15


class Kind(str, Enum):
    ATOMIC = "atomic"
    POLYNOMIAL = "polynomial"
    MIXED = "mixed"
    ANALYTIC = "analytic"


class Segment(NamedTuple):
    lo: float
    hi: float
    coeffs: np.ndarray

    @property
    def width(self):
        return self.hi - self.lo

    def mass(self):
        return float(P.polyval(self.width, P.polyint(self.coeffs)))


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float
    abs_mean: float

    def __post_init__(self):
        if self.variance < 0 or self.abs_mean < 0:
            raise PreconditionError("variance and abs_mean must be nonnegative")


def _binomial_power(alpha, k):
    """Coefficients of (s + alpha)**k in s."""
    out = np.zeros(k + 1)
    for j in range(k + 1):
        out[j] = math.comb(k, j) * alpha ** (k - j)
    return out


@dataclass(frozen=True)
class AnalyticLaw:
    """``loc + scale * Z`` with ``Z`` standard normal or ``Exp(1) - 1``."""

    family: str
    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if self.family not in ("normal", "exp1"):
            raise UnsupportedKindError(f"unknown analytic family {self.family!r}")
        if not (math.isfinite(self.scale) and self.scale != 0.0):
            raise DegenerateInputError("analytic law needs a finite nonzero scale")
        if self.family == "normal" and self.scale < 0:
            object.__setattr__(self, "scale", -self.scale)

    # standardized member
    def _std_cdf(self, z):
        if self.family == "normal":
            return normal_cdf(z)
        z = np.asarray(z, dtype=float)
        return np.where(z >= -1.0, -np.expm1(-(np.maximum(z, -1.0) + 1.0)), 0.0)

    def _std_sf(self, z):
        if self.family == "normal":
            return normal_cdf(-np.asarray(z, dtype=float))
        z = np.asarray(z, dtype=float)
        return np.where(z >= -1.0, np.exp(-(np.maximum(z, -1.0) + 1.0)), 1.0)

    def _std_pdf(self, z):
        if self.family == "normal":
            return normal_pdf(z)
        z = np.asarray(z, dtype=float)
        return np.where(z >= -1.0, np.exp(-(np.maximum(z, -1.0) + 1.0)), 0.0)

    def _std_ppf(self, q):
        if self.family == "normal":
            return normal_ppf(q)
        return -np.log1p(-np.asarray(q, dtype=float)) - 1.0

    def _std_isf(self, q):
        if self.family == "normal":
            return -normal_ppf(q)
        return -np.log(np.asarray(q, dtype=float)) - 1.0

    def cdf(self, t):
        z = (np.asarray(t, dtype=float) - self.loc) / self.scale
        out = self._std_cdf(z) if self.scale > 0 else self._std_sf(z)
        return float(out) if np.ndim(t) == 0 else out

    def sf(self, t):
        z = (np.asarray(t, dtype=float) - self.loc) / self.scale
        out = self._std_sf(z) if self.scale > 0 else self._std_cdf(z)
        return float(out) if np.ndim(t) == 0 else out

    def pdf(self, t):
        z = (np.asarray(t, dtype=float) - self.loc) / self.scale
        out = self._std_pdf(z) / abs(self.scale)
        return float(out) if np.ndim(t) == 0 else out

    def ppf(self, q):
        q = np.asarray(q, dtype=float)
        out = self.loc + self.scale * (self._std_ppf(q) if self.scale > 0 else self._std_ppf(1.0 - q))
        return float(out) if np.ndim(out) == 0 else out

    def isf(self, q):
        """Inverse survival function; accurate for tiny ``q``."""
        q = np.asarray(q, dtype=float)
        out = self.loc + self.scale * (self._std_isf(q) if self.scale > 0 else self._std_ppf(q))
        return float(out) if np.ndim(out) == 0 else out

    @property
    def kinks(self):
        return [] if self.family == "normal" else [self.loc - self.scale]

    @property
    def support(self):
        if self.family == "normal":
            return (-math.inf, math.inf)
        edge = self.loc - self.scale
        return (edge, math.inf) if self.scale > 0 else (-math.inf, edge)

    @property
    def max_density(self):
        return (INV_SQRT_2PI if self.family == "normal" else 1.0) / abs(self.scale)

    def affine(self, a, b):
        return AnalyticLaw(self.family, a * self.loc + b, a * self.scale)

    def moments(self):
        mu, s = self.loc, self.scale
        if self.family == "normal":
            sig = abs(s)
            abs_mean = (sig * math.sqrt(2.0 / math.pi) * math.exp(-mu * mu / (2 * sig * sig))
                        + mu * (1.0 - 2.0 * normal_cdf(-mu / sig)))
        else:
            # X = s*E + c with E ~ Exp(1)
            c = mu - s
            a, c = (s, c) if s > 0 else (-s, -c)
            if c >= 0:
                abs_mean = a + c
            else:
                e0 = -c / a
                neg = -c * (-math.expm1(-e0)) - a * (1.0 - math.exp(-e0) * (1.0 + e0))
                abs_mean = a + c + 2.0 * neg
        return MomentSummary(mu, s * s, max(abs_mean, abs(mu)))

    def label(self):
        name = "normal" if self.family == "normal" else "exp1"
        if self.loc == 0.0 and self.scale == 1.0:
            return name
        return f"{name}[{self.loc:.6g},{self.scale:.6g}]"


def _merge_atoms(locs, masses, rtol=ATOM_MERGE_RTOL):
    locs = np.asarray(locs, dtype=float).ravel()
    masses = np.asarray(masses, dtype=float).ravel()
    if locs.size == 0:
        return locs, masses
    order = np.argsort(locs, kind="stable")
    locs, masses = locs[order], masses[order]
    gap = np.diff(locs) > rtol * np.maximum(1.0, np.abs(locs[1:]))
    starts = np.concatenate([[0], np.nonzero(gap)[0] + 1])
    msum = np.add.reduceat(masses, starts)
    wsum = np.add.reduceat(masses * locs, starts)
    ends = np.concatenate([starts[1:], [locs.size]]) - 1
    same = locs[ends] == locs[starts]  # coincident atoms keep their exact location
    merged = np.where(same | (msum == 0), locs[starts], wsum / np.where(msum == 0, 1, msum))
    keep = msum > 0
    return merged[keep], msum[keep]


def _snap_knots(points, rtol=KNOT_SNAP_RTOL):
    pts = np.unique(np.asarray(points, dtype=float))
    if pts.size <= 1:
        return pts
    keep = np.concatenate([[True], np.diff(pts) > rtol * np.maximum(1.0, np.abs(pts[1:]))])
    return pts[keep]


def _normalize_pieces(pieces):
    """Sum possibly overlapping ``(lo, hi, coeffs)`` pieces onto disjoint segments."""
    if not pieces:
        return []
    knots = _snap_knots([p[0] for p in pieces] + [p[1] for p in pieces])

    def snap(x):
        i = int(np.argmin(np.abs(knots - x)))
        return knots[i]

    los = np.array([snap(p[0]) for p in pieces])
    his = np.array([snap(p[1]) for p in pieces])
    out = []
    for j in range(knots.size - 1):
        a, b = knots[j], knots[j + 1]
        cover = np.nonzero((los <= a) & (his >= b))[0]
        if cover.size == 0:
            continue
        acc = np.zeros(1)
        for i in cover:
            acc = P.polyadd(acc, taylor_shift(pieces[i][2], a - pieces[i][0]))
        out.append(Segment(float(a), float(b), np.asarray(acc, dtype=float)))
    return out


class Distribution:
    """Immutable law: sorted atoms plus disjoint polynomial-density segments.

    Use the factory classmethods (:meth:`rademacher`, :meth:`uniform`, ...)
    rather than the raw constructor.  On construction the total mass is
    checked; drift below ``MASS_TOL`` is renormalized away and anything larger
    is rejected.
    """

    def __init__(self, locs=(), masses=(), segments=(), *, analytic=None, label=None):
        self.label = label
        self.analytic = analytic
        if analytic is not None:
            if len(locs) or len(segments):
                raise PreconditionError("analytic laws carry no atoms or segments")
            self.locs = np.empty(0)
            self.masses = np.empty(0)
            self.segments = ()
            return
        locs = np.asarray(locs, dtype=float).ravel()
        masses = np.asarray(masses, dtype=float).ravel()
        if locs.shape != masses.shape:
            raise PreconditionError("atom locations and masses differ in length")
        if np.any(~np.isfinite(locs)) or np.any(~np.isfinite(masses)):
            raise PreconditionError("atoms must be finite")
        if np.any(np.diff(locs) <= 0):
            raise PreconditionError("atom locations must be strictly increasing")
        if np.any(masses < 0):
            raise PreconditionError("atom masses must be nonnegative")
        segs = tuple(Segment(float(s[0]), float(s[1]), np.atleast_1d(np.asarray(s[2], dtype=float)))
                     for s in segments)
        for s in segs:
            if not s.lo < s.hi:
                raise PreconditionError(f"segment [{s.lo}, {s.hi}] is empty")
        for s0, s1 in zip(segs, segs[1:]):
            if s1.lo < s0.hi - KNOT_SNAP_RTOL * max(1.0, abs(s0.hi)):
                raise PreconditionError("segments must be sorted and disjoint")
        top = 0.0
        for s in segs:
            ts = np.concatenate([[0.0, s.width], real_roots_in(P.polyder(s.coeffs), s.width)])
            vals = P.polyval(ts, s.coeffs)
            top = max(top, float(vals.max()))
            if vals.min() < -NEGATIVE_DENSITY_TOL * max(1.0, top):
                raise PreconditionError(f"density is negative on [{s.lo}, {s.hi}]")
        total = float(masses.sum()) + sum(s.mass() for s in segs)
        if not abs(total - 1.0) <= MASS_TOL:
            raise PreconditionError(f"total mass {total!r} differs from 1 by more than {MASS_TOL}")
        if total != 1.0:
            masses = masses / total
            segs = tuple(Segment(s.lo, s.hi, s.coeffs / total) for s in segs)
        if not len(locs) and not segs:
            raise PreconditionError("empty distribution")
        self.locs = locs
        self.masses = masses
        self.segments = segs

    # factories
    @classmethod
    def deterministic(cls, c=0.0, label=None):
        return cls([float(c)], [1.0], label=label or f"det:{c:g}")

    @classmethod
    def rademacher(cls):
        return cls([-1.0, 1.0], [0.5, 0.5], label="rademacher")

    @classmethod
    def uniform(cls, a, b, label=None):
        a, b = float(a), float(b)
        if not a < b:
            raise PreconditionError("uniform law needs a < b")
        return cls(segments=[(a, b, [1.0 / (b - a)])], label=label or f"uniform:{a:g},{b:g}")

    @classmethod
    def from_atoms(cls, locs, masses, label=None):
        locs, masses = _merge_atoms(locs, masses, rtol=0.0)
        return cls(locs, masses, label=label)

    @classmethod
    def three_point(cls, xs, ps, label=None):
        if len(xs) != 3 or len(ps) != 3:
            raise PreconditionError("three-point law needs three locations and three masses")
        return cls.from_atoms(xs, ps, label=label or "threepoint")

    @classmethod
    def normal(cls, loc=0.0, scale=1.0):
        law = AnalyticLaw("normal", float(loc), float(scale))
        return cls(analytic=law, label=law.label())

    @classmethod
    def exp1(cls):
        law = AnalyticLaw("exp1")
        return cls(analytic=law, label="exp1")

    # descriptors
    @property
    def kind(self):
        if self.analytic is not None:
            return Kind.ANALYTIC
        if not self.segments:
            return Kind.ATOMIC
        return Kind.POLYNOMIAL if self.locs.size == 0 else Kind.MIXED

    @property
    def is_exact(self):
        return self.analytic is None

    @property
    def atoms(self):
        return list(zip(self.locs.tolist(), self.masses.tolist()))

    @property
    def max_degree(self):
        return max((s.coeffs.size - 1 for s in self.segments), default=-1)

    @property
    def support(self):
        if self.analytic is not None:
            return self.analytic.support
        ends = list(self.locs[[0, -1]]) if self.locs.size else []
        if self.segments:
            ends += [self.segments[0].lo, self.segments[-1].hi]
        return (min(ends), max(ends))

    def range_for(self, eps=TAIL_EPS):
        """Finite interval carrying all but ``eps`` of the mass on each side."""
        if self.analytic is None:
            return self.support
        lo, hi = self.analytic.support
        if not math.isfinite(lo):
            lo = self.analytic.ppf(eps)
        if not math.isfinite(hi):
            hi = self.analytic.isf(eps)
        return (lo, hi)

    @property
    def knots(self):
        """Atom locations and segment endpoints (kinks for analytic laws)."""
        if self.analytic is not None:
            return np.asarray(self.analytic.kinks, dtype=float)
        pts = [self.locs] + [np.array([s.lo, s.hi]) for s in self.segments]
        return np.unique(np.concatenate(pts))

    def __repr__(self):
        name = self.label or self.kind.value
        if self.analytic is not None:
            return f"Distribution({name})"
        return (f"Distribution({name}, atoms={self.locs.size}, segments={len(self.segments)}, "
                f"degree={self.max_degree})")

    @cached_property
    def cdf_pp(self):
        """The distribution function as a :class:`PiecewisePoly` (exact kinds)."""
        if self.analytic is not None:
            raise UnsupportedKindError("analytic laws have no piecewise-polynomial CDF")
        knots = self.knots
        seg_lo = np.array([s.lo for s in self.segments])
        seg_hi = np.array([s.hi for s in self.segments])
        atom_at = dict(zip(self.locs.tolist(), self.masses.tolist()))
        pieces = []
        cum = 0.0
        for j in range(knots.size - 1):
            a, b = knots[j], knots[j + 1]
            cum += atom_at.get(float(a), 0.0)
            i = int(np.searchsorted(seg_lo, a, side="right")) - 1 if seg_lo.size else -1
            if i >= 0 and seg_hi[i] >= b:
                dens = taylor_shift(self.segments[i].coeffs, a - seg_lo[i])
                anti = P.polyint(dens)
                anti[0] = cum
                pieces.append(anti)
                cum = float(P.polyval(b - a, anti))
            else:
                pieces.append(np.array([cum]))
        return PiecewisePoly(knots, pieces, 0.0, 1.0)

    @cached_property
    def density_pp(self):
        """Absolutely continuous part of the density (atoms omitted)."""
        if self.analytic is not None:
            raise UnsupportedKindError("analytic laws have no piecewise-polynomial density")
        knots = self.knots
        seg_lo = np.array([s.lo for s in self.segments])
        seg_hi = np.array([s.hi for s in self.segments])
        pieces = []
        for j in range(knots.size - 1):
            a, b = knots[j], knots[j + 1]
            i = int(np.searchsorted(seg_lo, a, side="right")) - 1 if seg_lo.size else -1
            if i >= 0 and seg_hi[i] >= b:
                pieces.append(taylor_shift(self.segments[i].coeffs, a - seg_lo[i]))
            else:
                pieces.append(np.zeros(1))
        return PiecewisePoly(knots, pieces, 0.0, 0.0)

    def cdf(self, t):
        if self.analytic is not None:
            return self.analytic.cdf(t)
        return self.cdf_pp(t)

    def cdf_left(self, t):
        """``Pr[X < t]``."""
        if self.analytic is not None:
            return self.analytic.cdf(t)
        return self.cdf_pp.left_limit(t)

    def sf(self, t):
        """``Pr[X > t]``, accurate in the far right tail for analytic laws."""
        if self.analytic is not None:
            return self.analytic.sf(t)
        return 1.0 - self.cdf_pp(t)

    def max_density(self):
        if self.analytic is not None:
            return self.analytic.max_density
        if not self.segments:
            return 0.0
        return self.density_pp.max_value()


def cdf_at(d, t):
    """``Pr[X <= t]``; right-continuous, vectorized over ``t``."""
    return d.cdf(t)


def _segment_power_integral(seg, k, center=0.0, a=None, b=None):
    """Integral of ``(x - center)**k * f(x)`` over ``[a, b]`` within ``seg``."""
    a = seg.lo if a is None else a
    b = seg.hi if b is None else b
    poly = P.polymul(seg.coeffs, _binomial_power(seg.lo - center, k))
    anti = P.polyint(poly)
    return float(P.polyval(b - seg.lo, anti) - P.polyval(a - seg.lo, anti))


def moment_summary(d):
    """Mean, variance and mean absolute value, by exact integration."""
    if d.analytic is not None:
        return d.analytic.moments()
    mean = float(np.dot(d.locs, d.masses)) + sum(_segment_power_integral(s, 1) for s in d.segments)
    var = (float(np.dot((d.locs - mean) ** 2, d.masses))
           + sum(_segment_power_integral(s, 2, center=mean) for s in d.segments))
    abs_mean = tail_moment(d, 1, 0.0)
    return MomentSummary(mean, max(var, 0.0), max(abs_mean, abs(mean)))


def tail_moment(d, p, y):
    """``E[|Z|**p ; |Z| > y]`` for ``p`` in {1, 2} and ``y >= 0``."""
    if p not in (1, 2):
        raise PreconditionError(f"tail moment order must be 1 or 2, got {p!r}")
    y = float(y)
    if y < 0 or not math.isfinite(y):
        raise PreconditionError("tail threshold must be a finite nonnegative number")
    if d.analytic is not None:
        return _analytic_tail_moment(d.analytic, p, y)
    sel = np.abs(d.locs) > y
    total = float(np.dot(np.abs(d.locs[sel]) ** p, d.masses[sel]))
    for s in d.segments:
        cuts = [c for c in (-y, 0.0, y) if s.lo < c < s.hi]
        pts = [s.lo] + cuts + [s.hi]
        for a, b in zip(pts, pts[1:]):
            mid = 0.5 * (a + b)
            if abs(mid) <= y:
                continue
            val = _segment_power_integral(s, p, a=a, b=b)
            total += val if (p == 2 or mid > 0) else -val
    return max(total, 0.0)


def _analytic_tail_moment(law, p, y):
    lo, hi = law.ppf(1e-18), law.isf(1e-18)
    s_lo, s_hi = law.support
    lo, hi = max(lo, s_lo), min(hi, s_hi)

    def g(x):
        return np.abs(x) ** p * law.pdf(x)

    total = 0.0
    for a, b in ((lo, -y), (y, hi)):
        if b > a:
            brk = [k for k in law.kinks if a < k < b]
            v, _ = integrate(g, a, b, tol=1e-13, breaks=brk)
            total += v
    return total


def affine_transform(d, a, b, label=None):
    """Law of ``a*X + b``."""
    a, b = float(a), float(b)
    if a == 0.0 or not math.isfinite(a):
        raise DegenerateInputError("affine scale must be finite and nonzero; "
                                   "use Distribution.deterministic for point masses")
    label = d.label if label is None else label
    if a == 1.0 and b == 0.0 and label == d.label:
        return d
    if d.analytic is not None:
        law = d.analytic.affine(a, b)
        return Distribution(analytic=law, label=label)
    locs = a * d.locs + b
    masses = d.masses
    segs = []
    for s in d.segments:
        if a > 0:
            segs.append((a * s.lo + b, a * s.hi + b, scale_argument(s.coeffs, 1.0 / a) / a))
        else:
            q = taylor_shift(s.coeffs, s.width)
            segs.append((a * s.hi + b, a * s.lo + b, scale_argument(q, 1.0 / a) / -a))
    if a < 0:
        locs, masses, segs = locs[::-1], masses[::-1], segs[::-1]
    return Distribution(locs, masses, segs, label=label)


def standardize(d, mode="clt"):
    """Center and rescale to variance 1 (``clt``) or mean absolute value 1 (``wlln``)."""
    s = moment_summary(d)
    if mode == "clt":
        if not s.variance > 0:
            raise DegenerateInputError("cannot standardize a law with zero variance")
        scale = math.sqrt(s.variance)
    elif mode == "wlln":
        centered = affine_transform(d, 1.0, -s.mean) if s.mean != 0.0 else d
        scale = moment_summary(centered).abs_mean
        if not scale > 0:
            raise DegenerateInputError("cannot standardize a law with zero absolute mean")
    else:
        raise PreconditionError(f"unknown standardization mode {mode!r}")
    return affine_transform(d, 1.0 / scale, -s.mean / scale)


@lru_cache(maxsize=None)
def _pascal(n):
    """``C[r, j] = comb(r, j)`` for ``0 <= j <= r < n``."""
    C = np.zeros((n, n))
    for r in range(n):
        C[r, : r + 1] = [math.comb(r, j) for j in range(r + 1)]
    C.setflags(write=False)
    return C


def _conv_segment_pair(p, L1, q, L2):
    """Density pieces of ``f*g`` for ``f = p`` on ``[0, L1]`` and ``g = q`` on ``[0, L2]``.

    ``h(s) = int p(u) q(s - u) du`` over ``max(0, s - L2) <= u <= min(L1, s)``.
    Each region between the breakpoints {0, L1, L2, L1 + L2} is expanded
    around its own left end.  Returns ``[(s0, s1, coeffs in s - s0), ...]``.
    """
    dp, dq = p.size - 1, q.size - 1
    R = dp + dq + 2  # powers of u after integrating
    C = _pascal(max(R, dq + 1))
    m_idx, k_idx = np.meshgrid(np.arange(dq + 1), np.arange(dq + 1), indexing="ij")
    inside = m_idx + k_idx <= dq
    sign = np.where(k_idx % 2, -1.0, 1.0)
    r = np.arange(R)
    brk = np.unique([0.0, L1, L2, L1 + L2])
    out = []
    for s0, s1 in zip(brk, brk[1:]):
        if s1 - s0 <= KNOT_SNAP_RTOL * max(1.0, s1):
            continue
        mid = 0.5 * (s0 + s1)
        qs = taylor_shift(q, s0)
        # qs(sigma - u) = sum_{m,k} qs[m+k] C(m+k, k) (-1)^k sigma^m u^k
        jk = np.minimum(m_idx + k_idx, dq)
        cmk = np.where(inside, qs[jk] * C[jk, k_idx] * sign, 0.0)
        # integrand p(u) qs(sigma - u) = sum M[m, r] sigma^m u^r; A integrates over u
        M = np.array([np.convolve(cmk[m], p) for m in range(dq + 1)])
        A = np.zeros((dq + 1, R))
        A[:, 1:] = M[:, : R - 1] / np.arange(1, R)

        def at(alpha, beta):
            # sum A[m, r] sigma^m (alpha + beta sigma)^r as a polynomial in sigma
            with np.errstate(invalid="ignore"):
                B = C[:R, :R] * np.power(float(alpha), np.subtract.outer(r, r).clip(0)) \
                    * np.power(float(beta), r)[None, :]
            inner = A @ np.tril(B)
            res = np.zeros(dq + R)
            for m in range(dq + 1):
                res[m: m + R] += inner[m]
            return res

        upper = at(s0, 1.0) if mid <= L1 else at(L1, 0.0)
        lower = at(0.0, 0.0) if mid <= L2 else at(s0 - L2, 1.0)
        h = upper - lower
        out.append((s0, s1, h[: dp + dq + 2]))
    return out


def convolve_pair(d1, d2, max_atoms=DEFAULT_ATOM_CAP):
    """Exact law of ``X1 + X2`` for independent exact-kind operands."""
    if d1.analytic is not None or d2.analytic is not None:
        raise UnsupportedKindError("exact convolution needs atomic or polynomial operands")
    deg = max(d1.max_degree, -1) + max(d2.max_degree, -1) + 1
    if d1.segments and d2.segments and deg > DEGREE_CAP:
        raise UnsupportedKindError(f"convolution degree {deg} exceeds cap {DEGREE_CAP}")
    n1, n2 = d1.locs.size, d2.locs.size
    if n1 * n2 > 50 * max_atoms:
        raise AtomCapExceeded(f"{n1} x {n2} atom products exceed the budget {max_atoms}")
    locs, masses = _merge_atoms(np.add.outer(d1.locs, d2.locs), np.multiply.outer(d1.masses, d2.masses))
    if locs.size > max_atoms:
        raise AtomCapExceeded(f"sum has {locs.size} atoms, cap is {max_atoms}")
    pieces = []
    for (atoms, masses_, segs) in ((d1.locs, d1.masses, d2.segments), (d2.locs, d2.masses, d1.segments)):
        for x, m in zip(atoms, masses_):
            for s in segs:
                pieces.append((s.lo + x, s.hi + x, m * s.coeffs))
    for s1 in d1.segments:
        for s2 in d2.segments:
            # the shifted factor should be the wider one, so shifts stay within
            # a couple of its own widths and coefficients do not blow up
            f, g = (s1, s2) if s1.width <= s2.width else (s2, s1)
            for a, b, c in _conv_segment_pair(f.coeffs, f.width, g.coeffs, g.width):
                base = s1.lo + s2.lo
                pieces.append((base + a, base + b, c))
    return Distribution(locs, masses, _normalize_pieces(pieces))


def sum_iid(d, n, max_atoms=DEFAULT_ATOM_CAP):
    """Exact law of the sum of ``n`` independent copies of ``d``."""
    if int(n) != n or n < 1:
        raise PreconditionError(f"number of summands must be a positive integer, got {n!r}")
    n = int(n)
    if n == 1:
        return d
    if d.analytic is not None:
        if d.analytic.family == "normal":
            law = AnalyticLaw("normal", n * d.analytic.loc, math.sqrt(n) * d.analytic.scale)
            return Distribution(analytic=law, label=law.label())
        raise UnsupportedKindError(f"no closed-form {n}-fold sum for {d.analytic.family}")
    if d.locs.size == 1 and not d.segments:
        return Distribution([n * d.locs[0]], [1.0], label=d.label)
    if d.segments and n * (d.max_degree + 1) - 1 > DEGREE_CAP:
        raise UnsupportedKindError(f"{n}-fold sum would exceed polynomial degree cap {DEGREE_CAP}")
    result, base, k = None, d, n
    while k:
        if k & 1:
            result = base if result is None else convolve_pair(result, base, max_atoms)
        k >>= 1
        if k:
            base = convolve_pair(base, base, max_atoms)
    result.label = d.label
    return result


def sup_distance(f, g, lipschitz_bound=None, tol=DEFAULT_TOL):
    """Kolmogorov distance ``sup_t |F(t) - G(t)|`` with a certified enclosure.

    For two exact laws the supremum is found exactly over atoms, breakpoints
    and critical points of the piecewise-polynomial difference.  If either law
    is analytic, ``lipschitz_bound`` must bound ``|F' - G'|`` away from atoms
    (for CDFs, the larger of the two densities); the search then certifies
    ``value <= sup <= value + enclosure``.
    """
    if f.is_exact and g.is_exact:
        v, t = (f.cdf_pp - g.cdf_pp).sup_abs()
        return SupDistance(v, t, 0.0)
    if lipschitz_bound is None:
        raise UncertifiableError("sup distance involving an analytic law needs lipschitz_bound")
    lo = min(f.range_for()[0], g.range_for()[0])
    hi = max(f.range_for()[1], g.range_for()[1])
    knots = np.concatenate([[lo, hi], f.knots, g.knots])
    knots = knots[(knots >= lo) & (knots <= hi)]
    tail = max(f.cdf_left(lo), g.cdf_left(lo), f.sf(hi), g.sf(hi))
    err = ANALYTIC_CDF_ERROR * ((not f.is_exact) + (not g.is_exact))
    return certified_sup(lambda t: f.cdf(t) - g.cdf(t), knots, lipschitz_bound,
                         h_left=lambda t: f.cdf_left(t) - g.cdf_left(t),
                         tail_bound=tail, value_error=err, tol=tol)
