"""Seeded sampling, empirical CDFs and DKW band checks.

Every draw comes from a Philox counter-based generator keyed by
``(seed, stream, batch)``.  Large requests are cut into fixed-size batches,
each with its own key, so results are bit-identical whatever the number of
worker threads.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import PreconditionError
from .parallel import pmap
from .smoothkernel import BetaSmoother

BATCH_ROWS = 1 << 14
BATCH_VALUES = 1 << 21  # cap on uniforms per batch for sums of many terms
BISECT_TOL = 1e-12
DEFAULT_ALPHA = 1e-3
_U64 = 1 << 64


@dataclass(frozen=True)
class RngSeed:
    seed: int
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            v = getattr(self, name)
            if int(v) != v or not 0 <= v < _U64:
                raise PreconditionError(f"{name} must be a 64-bit unsigned integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    def generator(self, batch=0):
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream, int(batch)))
        return np.random.Generator(np.random.Philox(ss))


def stream_id(*labels):
    """Stable 64-bit stream number for a tuple of labels (e.g. experiment, law, n)."""
    text = "\x1f".join(str(x) for x in labels).encode()
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "little")


class EmpiricalCdf:
    """Right-continuous step CDF of a sample; immutable."""

    __slots__ = ("_x",)

    def __init__(self, samples):
        x = np.sort(np.asarray(samples, dtype=float).ravel())
        if x.size == 0:
            raise PreconditionError("empirical CDF needs at least one sample")
        x.setflags(write=False)
        object.__setattr__(self, "_x", x)

    def __setattr__(self, name, value):
        raise AttributeError("EmpiricalCdf is immutable")

    @property
    def sorted_samples(self):
        return self._x

    @property
    def count(self):
        return self._x.size

    def __call__(self, t):
        out = np.searchsorted(self._x, t, side="right") / self._x.size
        return float(out) if np.ndim(t) == 0 else out

    def left_limit(self, t):
        out = np.searchsorted(self._x, t, side="left") / self._x.size
        return float(out) if np.ndim(t) == 0 else out

    def mean(self):
        return float(self._x.mean())


def _inverse_cdf(d, u):
    """Smallest ``x`` with ``F(x) >= u``.

    Atoms are returned exactly.  Otherwise the segment holding ``u`` is found
    from the CDF at segment ends; constant densities invert in closed form and
    other polynomials by bisection inside the segment to ``BISECT_TOL``.
    """
    out = np.full(u.shape, np.nan)
    if d.locs.size:
        hi = d.cdf(d.locs)
        lo = hi - d.masses
        k = np.minimum(np.searchsorted(hi, u, side="left"), d.locs.size - 1)
        hit = (u > lo[k]) & (u <= hi[k])
        out[hit] = d.locs[k[hit]]
    rest = np.flatnonzero(np.isnan(out))
    if rest.size == 0:
        return out
    segs = d.segments
    starts = d.cdf_left(np.array([s.lo for s in segs]))
    uu = u[rest]
    which = np.clip(np.searchsorted(starts, uu, side="right") - 1, 0, len(segs) - 1)
    for k, seg in enumerate(segs):
        sel = which == k
        if not np.any(sel):
            continue
        target = uu[sel] - starts[k]  # mass needed inside this segment
        c = seg.coeffs
        if c.size == 1 or not np.any(c[1:]):
            x = seg.lo + target / c[0]
        else:
            cum = P.polyint(c)
            a = np.zeros(target.shape)
            b = np.full(target.shape, seg.width)
            steps = max(1, math.ceil(math.log2(seg.width / BISECT_TOL)))
            for _ in range(steps):
                m = 0.5 * (a + b)
                up = P.polyval(m, cum) >= target
                b = np.where(up, m, b)
                a = np.where(up, a, m)
            x = seg.lo + b
        out[rest[sel]] = np.clip(x, seg.lo, seg.hi)
    return out


def _polar_normal(rng, size):
    """Marsaglia's polar method."""
    out = np.empty(size)
    filled = 0
    while filled < size:
        need = size - filled
        k = int(need / 0.78) + 16
        v = rng.uniform(-1.0, 1.0, size=(k, 2))
        s = np.einsum("ij,ij->i", v, v)
        ok = (s > 0.0) & (s < 1.0)
        v, s = v[ok], s[ok]
        f = np.sqrt(-2.0 * np.log(s) / s)
        z = (v * f[:, None]).ravel()[:need]
        out[filled:filled + z.size] = z
        filled += z.size
    return out


def _draw(d, rng, size):
    if isinstance(d, BetaSmoother):
        k = 2 * d.order - 1
        u = rng.uniform(-d.delta, d.delta, size=(size, k))
        return np.partition(u, d.order - 1, axis=1)[:, d.order - 1]
    law = d.analytic
    if law is not None:
        if law.family == "normal":
            return law.loc + law.scale * _polar_normal(rng, size)
        e = -np.log1p(-rng.random(size))  # Exp(1) by inversion
        return law.loc + law.scale * (e - 1.0)
    if d.locs.size == 1 and not d.segments:
        return np.full(size, d.locs[0])
    u = 1.0 - rng.random(size)  # (0, 1]
    if not d.segments:
        cum = np.cumsum(d.masses)
        k = np.minimum(np.searchsorted(cum, u * cum[-1], side="left"), d.locs.size - 1)
        return d.locs[k]
    return _inverse_cdf(d, u)


def _batched(total, rows_per_batch, seed, make, threads=None):
    """Concatenate ``make(rng, rows)`` over fixed batches, each keyed by its index."""
    jobs = [(i, min(rows_per_batch, total - s)) for i, s in enumerate(range(0, total, rows_per_batch))]
    return np.concatenate(pmap(lambda job: make(seed.generator(job[0]), job[1]), jobs, threads))


def _check_m(m):
    if int(m) != m or m < 1:
        raise PreconditionError(f"sample count must be a positive integer, got {m!r}")
    return int(m)


def sample_batch(d, m, seed, threads: Optional[int] = None):
    """``m`` i.i.d. draws from ``d`` (a Distribution or a BetaSmoother)."""
    m = _check_m(m)
    return EmpiricalCdf(_batched(m, BATCH_ROWS, seed, lambda rng, k: _draw(d, rng, k), threads))


def sample_median_of_uniforms(kernel, m, seed, threads: Optional[int] = None):
    """Median of ``2k - 1`` uniforms on ``[-delta, delta]`` for a Beta(k, k) kernel."""
    if not isinstance(kernel, BetaSmoother):
        raise PreconditionError("median-of-uniforms sampling needs a BetaSmoother")
    return sample_batch(kernel, m, seed, threads)


def simulate_scaled_sum(z_law, n, scaling, m, seed, threads: Optional[int] = None):
    """``m`` realizations of ``(Z_1 + ... + Z_n) / sqrt(n)`` (clt) or ``/ n`` (wlln)."""
    if int(n) != n or n < 1:
        raise PreconditionError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    if scaling not in ("clt", "wlln"):
        raise PreconditionError(f"scaling must be 'clt' or 'wlln', got {scaling!r}")
    m = _check_m(m)
    scale = 1.0 / math.sqrt(n) if scaling == "clt" else 1.0 / n
    rows = max(1, min(BATCH_ROWS, BATCH_VALUES // n))

    def make(rng, k):
        return _draw(z_law, rng, k * n).reshape(k, n).sum(axis=1) * scale

    return EmpiricalCdf(_batched(m, rows, seed, make, threads))


class DkwResult(NamedTuple):
    ks: float
    bound: float
    passed: bool


def dkw_bound(m, alpha=DEFAULT_ALPHA):
    if not 0.0 < alpha < 1.0:
        raise PreconditionError(f"alpha must lie in (0, 1), got {alpha!r}")
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * m))


ATOM_SNAP_RTOL = 1e-9


def _snap_to_atoms(x, locs):
    """Move samples lying within rounding distance of an atom onto it.

    Sums of scaled draws land next to, not on, the exact atom locations.
    """
    k = np.clip(np.searchsorted(locs, x), 1, locs.size - 1) if locs.size > 1 else np.zeros(x.size, int)
    if locs.size > 1:
        k = np.where(np.abs(x - locs[k - 1]) < np.abs(x - locs[k]), k - 1, k)
    near = locs[k]
    tol = ATOM_SNAP_RTOL * np.maximum(1.0, np.abs(near))
    return np.where(np.abs(x - near) <= tol, near, x)


def ks_distance(e, exact):
    """``sup_t |F_hat(t) - F(t)|``, checked at sample points, their left limits and atoms."""
    if exact.locs.size:
        e = EmpiricalCdf(_snap_to_atoms(e.sorted_samples, exact.locs))
    pts = np.unique(e.sorted_samples)
    vals = [np.abs(e(pts) - exact.cdf(pts)), np.abs(e.left_limit(pts) - exact.cdf_left(pts))]
    if exact.locs.size:
        a = exact.locs
        vals += [np.abs(e(a) - exact.cdf(a)), np.abs(e.left_limit(a) - exact.cdf_left(a))]
    return float(max(v.max() for v in vals))


def dkw_check(e, exact, alpha=DEFAULT_ALPHA):
    """KS distance of ``e`` from ``exact`` against the DKW band at level ``alpha``."""
    if e.count == 0:
        raise PreconditionError("empty sample")
    bound = dkw_bound(e.count, alpha)
    ks = ks_distance(e, exact)
    return DkwResult(ks, bound, ks <= bound)
