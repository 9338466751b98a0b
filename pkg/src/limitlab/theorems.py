"""Theorem-level experiments: CLT and WLLN convergence, de-smoothing, normal closure."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .convolve import DEFAULT_QUAD_TOL, smoothed_cdf_curve, smoothed_distance
from .distcore import Distribution, affine_transform, moment_summary, sum_iid, sup_distance
from .errors import AtomCapExceeded, PreconditionError, UnsupportedKindError
from .montecarlo import DEFAULT_ALPHA, RngSeed, dkw_bound, ks_distance, simulate_scaled_sum, stream_id
from .normal import INV_SQRT_2PI, normal_cdf, normal_pdf
from .quadrature import integrate_batch

MOMENT_TOL = 1e-9
SANDWICH_SLACK = 1e-10
DEFAULT_NS = (4, 16, 64, 256)
DEFAULT_SAMPLES = 10**5
DEFAULT_SEED = 20240101
TRUNCATION_SIGMAS = 9.0
CLOSURE_CHUNK = 2048


@dataclass(frozen=True)
class ConvergenceRecord:
    """One measurement; ``dist`` is the summand law's literal."""

    theorem: str
    dist: str
    n: int
    metric: str
    eval_point: Optional[float]
    value: float
    enclosure: float
    method: str = "exact"  # or "sampled" (enclosure is then a DKW band)

    def __post_init__(self):
        if self.theorem not in ("clt", "wlln"):
            raise PreconditionError(f"unknown theorem tag {self.theorem!r}")
        if self.metric not in ("sup_distance", "pointwise"):
            raise PreconditionError(f"unknown metric {self.metric!r}")
        if self.theorem == "wlln" and self.metric == "pointwise" and self.eval_point == 0:
            raise PreconditionError("the deterministic limit is discontinuous at t = 0")
        if not (self.value >= 0 and self.enclosure >= 0):
            raise PreconditionError("record values and enclosures must be nonnegative")


def _label(d):
    return d.label or repr(d)


def exact_scaled_sum(z, n, scale):
    """Exact law of ``(Z_1 + ... + Z_n) * scale``, or None if out of reach."""
    if not z.is_exact:
        return None
    try:
        return affine_transform(sum_iid(z, n), scale, 0.0)
    except (UnsupportedKindError, AtomCapExceeded):
        return None


def _require(cond, msg):
    if not cond:
        raise PreconditionError(msg)


def clt_convergence(z_law, ns=DEFAULT_NS, *, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED,
                    alpha=DEFAULT_ALPHA) -> List[ConvergenceRecord]:
    """``sup_t |F_{S_n}(t) - Phi(t)|`` for ``S_n = U_n / sqrt(n)``.

    Exact laws give certified values; otherwise ``samples`` draws are used and
    the enclosure is the DKW band at level ``alpha``.
    """
    m = moment_summary(z_law)
    _require(abs(m.mean) <= MOMENT_TOL and abs(m.variance - 1.0) <= MOMENT_TOL,
             f"{_label(z_law)} is not standardized (mean {m.mean!r}, variance {m.variance!r})")
    normal = Distribution.normal()
    out = []
    for n in ns:
        _require(int(n) == n and n >= 1, f"n must be a positive integer, got {n!r}")
        n = int(n)
        s = exact_scaled_sum(z_law, n, 1.0 / math.sqrt(n))
        if s is not None:
            lip = max(INV_SQRT_2PI, s.max_density())
            r = sup_distance(s, normal, lipschitz_bound=lip)
            out.append(ConvergenceRecord("clt", _label(z_law), n, "sup_distance", None,
                                         r.value, r.enclosure))
        else:
            rng = RngSeed(seed, stream_id("clt", _label(z_law), n))
            e = simulate_scaled_sum(z_law, n, "clt", samples, rng)
            out.append(ConvergenceRecord("clt", _label(z_law), n, "sup_distance", None,
                                         ks_distance(e, normal), dkw_bound(samples, alpha),
                                         "sampled"))
    return out


def _limit_d(t):
    return 0.0 if t < 0 else 1.0


def wlln_convergence(z_law, ns=DEFAULT_NS, ts=(-0.5, 0.5), *, samples=DEFAULT_SAMPLES,
                     seed=DEFAULT_SEED, alpha=DEFAULT_ALPHA) -> List[ConvergenceRecord]:
    """``|F_{S_n}(t) - F_D(t)|`` for ``S_n = U_n / n`` at each ``t != 0``."""
    ts = [float(t) for t in ts]
    _require(all(t != 0.0 for t in ts), "t = 0 is excluded: the limit jumps there")
    m = moment_summary(z_law)
    _require(abs(m.mean) <= MOMENT_TOL and abs(m.abs_mean - 1.0) <= MOMENT_TOL,
             f"{_label(z_law)} is not wlln-standardized (mean {m.mean!r}, E|Z| {m.abs_mean!r})")
    out = []
    for n in ns:
        _require(int(n) == n and n >= 1, f"n must be a positive integer, got {n!r}")
        n = int(n)
        s = exact_scaled_sum(z_law, n, 1.0 / n)
        if s is not None:
            vals = [abs(s.cdf(t) - _limit_d(t)) for t in ts]
            enc, method = 0.0, "exact"
        else:
            rng = RngSeed(seed, stream_id("wlln", _label(z_law), n))
            e = simulate_scaled_sum(z_law, n, "wlln", samples, rng)
            vals = [abs(e(t) - _limit_d(t)) for t in ts]
            enc, method = dkw_bound(samples, alpha), "sampled"
        for t, v in zip(ts, vals):
            out.append(ConvergenceRecord("wlln", _label(z_law), n, "pointwise", t, v, enc, method))
    return out


@dataclass(frozen=True)
class SandwichReport:
    t: float
    delta: float
    n: int
    eta: float
    inequalities: List[Tuple[str, float, float, bool]]

    @property
    def holds(self):
        return all(ok for *_, ok in self.inequalities)

    def to_dict(self):
        return {
            "t": self.t, "delta": self.delta, "n": self.n, "eta": self.eta,
            "inequalities": [{"name": a, "lhs": l, "rhs": r, "holds": ok}
                             for a, l, r, ok in self.inequalities],
        }


def smoothed_gap(s_law, t_law, kernel, tol=DEFAULT_QUAD_TOL):
    """Certified upper bound on ``||F_{S+W} - F_{T+W}||``."""
    return smoothed_distance(smoothed_cdf_curve(kernel, s_law, tol),
                             smoothed_cdf_curve(kernel, t_law, tol)).upper


def sandwich_check(s_law, t_law, kernel, t, n_label, *, eta=None, tol=DEFAULT_QUAD_TOL):
    """Evaluate both de-smoothing chains at ``t``.

    Upper chain: ``F_S(t) <= F_{S+W}(t+d) <= F_{T+W}(t+d) + eta <= F_T(t+2d) + eta``.
    Lower chain: ``F_T(t-2d) - eta <= F_{T+W}(t-d) - eta <= F_{S+W}(t-d) <= F_S(t)``.
    ``eta`` defaults to the certified smoothed distance between the laws.
    """
    d = kernel.delta
    t = float(t)
    fs = smoothed_cdf_curve(kernel, s_law, tol)
    ft = smoothed_cdf_curve(kernel, t_law, tol)
    if eta is None:
        eta = smoothed_distance(fs, ft).upper
    S, T = s_law.cdf, t_law.cdf
    rows = [
        ("F_S(t) <= F_S+W(t+d)", S(t), fs(t + d)),
        ("F_S+W(t+d) <= F_T+W(t+d) + eta", fs(t + d), ft(t + d) + eta),
        ("F_T+W(t+d) <= F_T(t+2d)", ft(t + d), T(t + 2 * d)),
        ("F_S(t) <= F_T(t+2d) + eta", S(t), T(t + 2 * d) + eta),
        ("F_S+W(t-d) <= F_S(t)", fs(t - d), S(t)),
        ("F_T+W(t-d) <= F_S+W(t-d) + eta", ft(t - d), fs(t - d) + eta),
        ("F_T(t-2d) <= F_T+W(t-d)", T(t - 2 * d), ft(t - d)),
        ("F_T(t-2d) <= F_S(t) + eta", T(t - 2 * d), S(t) + eta),
    ]
    ineq = [(name, float(l), float(r), bool(l <= r + SANDWICH_SLACK)) for name, l, r in rows]
    return SandwichReport(t, d, int(n_label), float(eta), ineq)


def in_probability_bridge(s_law, eps):
    """``1 - F(eps) + F(-eps)``, an upper bound on ``Pr[|S| > eps]``."""
    if not eps > 0:
        raise PreconditionError("eps must be positive")
    return float(s_law.sf(eps) + s_law.cdf(-eps))


def _normal_sum_cdf(sigmas, tol):
    """CDF of a sum of centred normals, one quadrature convolution per extra summand."""
    s0 = float(sigmas[0])

    def base(x):
        return normal_cdf(np.asarray(x, dtype=float) / s0)

    f = base
    for s in sigmas[1:]:
        f = _convolve_normal(f, float(s), tol)
    return f


def _convolve_normal(cdf, sigma, tol):
    """``t -> int cdf(t - x) phi_sigma(x) dx`` over ``|x| <= 9 sigma``."""
    r = TRUNCATION_SIGMAS * sigma

    def conv(ts):
        ts = np.asarray(ts, dtype=float)
        flat = np.atleast_1d(ts).ravel()

        def integrand(x, t):
            vals = cdf((t - x).ravel()).reshape(x.shape)
            return vals * normal_pdf(x / sigma) / sigma

        # chunked so nested levels keep a bounded number of live nodes
        parts = [integrate_batch(integrand, flat[i:i + CLOSURE_CHUNK], -r, r, tol=tol,
                                 initial_panels=6)[0]
                 for i in range(0, flat.size, CLOSURE_CHUNK)]
        return np.concatenate(parts).reshape(ts.shape) if parts else np.zeros(ts.shape)

    return conv


def normal_closure_check(sigmas, grid, tol=1e-11):
    """``max_t |F_{sum}(t) - Phi(t / sigma_total)|`` over ``grid``.

    Each extra summand nests one more quadrature, so the cost grows
    geometrically with ``len(sigmas)``; two or three terms take well under
    a second.
    """
    sigmas = [float(s) for s in sigmas]
    if not sigmas:
        raise PreconditionError("need at least one sigma")
    if not all(s > 0 for s in sigmas):
        raise PreconditionError("sigmas must be positive")
    grid = np.asarray(grid, dtype=float)
    total = math.sqrt(sum(s * s for s in sigmas))
    f = _normal_sum_cdf(sigmas, tol)
    return float(np.max(np.abs(f(grid) - normal_cdf(grid / total))))
