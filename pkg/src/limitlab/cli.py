"""Command-line experiment runner.

    limitlab lemmas   [--kernel beta:k,d ...] [--n 1,2,4,8]
    limitlab clt      [--dist LAW ...] [--n 4,16,64,256]
    limitlab wlln     [--dist LAW ...] [--n ...] [--t -0.5,0.5]
    limitlab sandwich [--dist LAW ...] [--n 4,16] [--t ...] [--delta D]
    limitlab mc       [--dist LAW ...] [--n ...] [--samples M] [--seed S] [--stream K]
    limitlab kernels  [--kernel ...] [--dist LAW ...]

Settings may come from a JSON file (``--config``); flags override it.
Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 usage or input
error, 3 numeric certification failure.  Failures are also reported as one
JSON object on stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import lindeberg as lb
from . import montecarlo as mc
from . import reports
from . import theorems as th
from .convolve import DEFAULT_QUAD_TOL, smoothed_cdf_curve
from .distcore import Distribution, affine_transform, standardize, sum_iid
from .errors import AtomCapExceeded, CertificationError, UncertifiableError, UnsupportedKindError
from .literals import parse_distribution, parse_kernel
from .smoothkernel import kernel_derivative, make_smoother

COMMANDS = ("lemmas", "clt", "wlln", "sandwich", "mc", "kernels")
FORMATS = ("csv", "json", "svg", "samples")
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULT_LADDER = [4, 16, 64, 256]
DEFAULTS = {
    "lemmas": dict(ns=[1, 2, 4, 8]),
    "clt": dict(dists=["rademacher"], ns=DEFAULT_LADDER),
    "wlln": dict(dists=["rademacher"], ns=DEFAULT_LADDER, ts=[-0.5, 0.5]),
    "sandwich": dict(ns=[4, 16], ts=[-1.0, -0.1, 0.0, 0.1, 1.0]),
    "mc": dict(dists=["rademacher"], ns=[100]),
    "kernels": dict(kernels=["beta:2,1", "beta:3,1"]),
}
PRIMARY_FORMAT = {"lemmas": "json", "sandwich": "json"}


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    command: str
    dists: List[str] = field(default_factory=list)
    kernels: List[str] = field(default_factory=list)
    ns: List[int] = field(default_factory=list)
    ts: List[float] = field(default_factory=list)
    eps: Optional[float] = None
    delta: Optional[float] = None
    alpha: float = mc.DEFAULT_ALPHA
    seed: int = th.DEFAULT_SEED
    stream: Optional[int] = None
    samples: int = th.DEFAULT_SAMPLES
    out: Optional[str] = None
    formats: List[str] = field(default_factory=list)
    quad_tol: float = DEFAULT_QUAD_TOL
    expect: List[dict] = field(default_factory=list)

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        for d in self.dists:
            parse_distribution(d)
        for k in self.kernels:
            parse_kernel(k)
        if any(int(n) != n or n < 1 for n in self.ns):
            raise UsageError("n values must be positive integers")
        bad = [f for f in self.formats if f not in FORMATS]
        if bad:
            raise UsageError(f"unknown format(s) {bad}; choose from {', '.join(FORMATS)}")
        if not 0.0 < self.alpha < 1.0:
            raise UsageError("alpha must lie in (0, 1)")
        if self.samples < 1:
            raise UsageError("samples must be positive")
        if self.eps is not None and not self.eps > 0:
            raise UsageError("eps must be positive")
        if self.delta is not None and not self.delta > 0:
            raise UsageError("delta must be positive")
        mc.RngSeed(self.seed, self.stream or 0)
        return self

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, raw):
        if not isinstance(raw, dict):
            raise UsageError("config must be a JSON object")
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(raw) - names)
        if unknown:
            raise UsageError(f"unknown config key(s): {', '.join(unknown)}")
        if "command" not in raw:
            raise UsageError("config needs a 'command'")
        return cls(**raw)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise UsageError(f"config is not valid JSON: {e}") from None
        return cls.from_dict(raw)


# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _list_of(conv):
    def parse(text):
        try:
            return [conv(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return parse


def _int(text):
    v = float(text)
    if v != int(v):
        raise ValueError(text)
    return int(v)


def build_parser():
    p = _Parser(prog="limitlab", description="Smoothing-and-swapping experiments for the CLT and WLLN.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--dist", action="append", help="law literal (repeatable)")
    p.add_argument("--kernel", action="append", help="kernel literal beta:k,delta (repeatable)")
    p.add_argument("--n", action="append", type=_list_of(_int), help="comma-separated n values")
    p.add_argument("--t", action="append", type=_list_of(float), help="comma-separated evaluation points")
    p.add_argument("--eps", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--stream", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--format", action="append", type=_list_of(str), help="csv, json, svg, samples")
    p.add_argument("--out", help="output directory (default: primary report on stdout)")
    p.add_argument("--quad-tol", type=float, dest="quad_tol")
    return p


def _flatten(xs):
    return None if xs is None else [v for group in xs for v in group]


def config_from_args(argv):
    args = build_parser().parse_args(argv)
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as e:
            raise UsageError(f"cannot read config: {e}") from None
        cfg = ExperimentConfig.from_json(text)
        if cfg.command != args.command:
            raise UsageError(f"config is for {cfg.command!r}, not {args.command!r}")
    else:
        cfg = ExperimentConfig(args.command)
    over = dict(dists=args.dist, kernels=args.kernel, ns=_flatten(args.n), ts=_flatten(args.t),
                eps=args.eps, delta=args.delta, alpha=args.alpha, seed=args.seed,
                stream=args.stream, samples=args.samples, out=args.out,
                formats=_flatten(args.format), quad_tol=args.quad_tol)
    for k, v in over.items():
        if v is not None:
            setattr(cfg, k, v)
    for k, v in DEFAULTS[cfg.command].items():
        if not getattr(cfg, k):
            setattr(cfg, k, list(v))
    if not cfg.formats:
        cfg.formats = [PRIMARY_FORMAT.get(cfg.command, "csv")]
    return cfg.validate()


# commands

@dataclass
class Outcome:
    passed: bool
    outputs: dict  # format -> text


def _laws(cfg, mode):
    out = []
    for text in cfg.dists:
        d = standardize(parse_distribution(text), mode)
        d.label = text
        out.append(d)
    return out


def _check_expectations(cfg, records):
    ok = True
    for e in cfg.expect:
        hits = [r for r in records if r.dist == e.get("dist") and r.n == e.get("n")
                and ("eval_point" not in e or r.eval_point == e["eval_point"])]
        if not hits:
            raise UsageError(f"expectation {e} matches no record")
        tol = float(e.get("tol", 0.0))
        ok &= all(abs(r.value - float(e["value"])) <= tol for r in hits)
    return ok


def _record_outputs(cfg, records):
    out = {}
    if "csv" in cfg.formats:
        out["csv"] = reports.records_to_csv(records)
    if "json" in cfg.formats:
        out["json"] = reports.to_json([dataclasses.asdict(r) for r in records])
    if "svg" in cfg.formats:
        out["svg"] = reports.render_chart(records)
    return out


def run_clt(cfg):
    recs = []
    for z in _laws(cfg, "clt"):
        recs += th.clt_convergence(z, cfg.ns, samples=cfg.samples, seed=cfg.seed, alpha=cfg.alpha)
    return Outcome(_check_expectations(cfg, recs), _record_outputs(cfg, recs))


def run_wlln(cfg):
    recs, bridge = [], []
    for z in _laws(cfg, "wlln"):
        recs += th.wlln_convergence(z, cfg.ns, cfg.ts, samples=cfg.samples, seed=cfg.seed,
                                    alpha=cfg.alpha)
        if cfg.eps is not None:
            for n in cfg.ns:
                s = th.exact_scaled_sum(z, n, 1.0 / n)
                if s is not None:
                    bridge.append({"dist": z.label, "n": n, "eps": cfg.eps,
                                   "bound": th.in_probability_bridge(s, cfg.eps)})
    out = _record_outputs(cfg, recs)
    if "json" in out and cfg.eps is not None:
        out["json"] = reports.to_json({"records": [dataclasses.asdict(r) for r in recs],
                                       "bridge": bridge})
    return Outcome(_check_expectations(cfg, recs), out)


def run_lemmas(cfg):
    kernels = [parse_kernel(k) for k in cfg.kernels] or None
    if cfg.dists:
        Ks = kernels or [make_smoother(d, k) for k, d in lb.MATRIX_KERNELS]
        laws = {"normal": _laws(cfg, "clt"), "det0": _laws(cfg, "wlln")}
        cells = [lb.MatrixCell(K, z, y, n) for K in Ks for y in ("normal", "det0")
                 for z in laws[y] for n in cfg.ns]
    else:
        cells = lb.swap_matrix(kernels, cfg.ns)
    swaps = lb.run_cells(cells, cfg.quad_tol)
    ks = kernels or [parse_kernel("beta:3,1"), parse_kernel("beta:2,1")]
    curves, cors = [], []
    for mode in ("clt", "wlln"):
        laws = _laws(cfg, mode) if cfg.dists else lb.suite_laws(mode)
        for K in ks:
            if mode == "clt" and K.order != 3:
                continue
            for z in laws:
                curve = lb.defect_curve(K, z, DEFAULT_LADDER, mode, cfg.quad_tol)
                curves.append(curve)
            own = {(c.z_law.label, n): d for c in curves[-len(laws):] for n, d, _ in c.points}
            for i, z in enumerate(laws):
                for z2 in laws[i + 1:]:
                    for n in DEFAULT_LADDER:
                        pair = lb.pair_defect(K, z, z2, n, mode, cfg.quad_tol)
                        bound = own[(z.label, n)] + own[(z2.label, n)]
                        cors.append({"mode": mode, "kernel": K.literal, "z": z.label,
                                     "z2": z2.label, "n": n, "pair_defect": pair,
                                     "bound": bound, "holds": pair <= bound + 1e-9})
    passed = all(s.verdict for s in swaps) and all(c["holds"] for c in cors)
    doc = {"verdict": passed, "swaps": swaps, "defect_curves": curves, "pair_checks": cors}
    return Outcome(passed, {"json": reports.to_json(doc)})


def run_sandwich(cfg):
    deltas = [cfg.delta] if cfg.delta else [0.1, 0.25]
    reps = []
    for y_kind, mode, order in (("normal", "clt", 3), ("det0", "wlln", 2)):
        laws = _laws(cfg, mode) if cfg.dists else lb.suite_laws(mode)
        for z in laws:
            for n in cfg.ns:
                s_law = sum_iid(lb.scaled_summand(z, n, mode), n)
                t_law = Distribution.normal() if y_kind == "normal" else Distribution.deterministic(0.0)
                for d in deltas:
                    K = parse_kernel(f"beta:{order},{d!r}")
                    eta = th.smoothed_gap(s_law, t_law, K, cfg.quad_tol)
                    for t in cfg.ts:
                        r = th.sandwich_check(s_law, t_law, K, t, n, eta=eta, tol=cfg.quad_tol)
                        reps.append({"s_law": f"{z.label} n={n}", "t_law": t_law.label,
                                     "kernel": K.literal, **r.to_dict(), "holds": r.holds})
    passed = all(r["holds"] for r in reps)
    return Outcome(passed, {"json": reports.to_json({"verdict": passed, "reports": reps})})


def run_mc(cfg):
    rows, first = [], None
    stream0 = cfg.stream

    def seed_for(*labels):
        return mc.RngSeed(cfg.seed, stream0 if stream0 is not None else mc.stream_id("mc", *labels))

    normal = Distribution.normal()
    for text in cfg.dists:
        raw = parse_distribution(text)
        e = mc.sample_batch(raw, cfg.samples, seed_for("batch", text))
        first = e if first is None else first
        rows.append(("batch", text, 1, mc.dkw_check(e, raw, cfg.alpha), None))
        z = standardize(raw, "clt")
        for n in cfg.ns:
            e = mc.simulate_scaled_sum(z, n, "clt", cfg.samples, seed_for("clt", text, n))
            exact = None
            if z.is_exact:
                try:
                    exact = affine_transform(sum_iid(z, n), 1.0 / math.sqrt(n), 0.0)
                except (UnsupportedKindError, AtomCapExceeded):
                    exact = None
            if exact is not None:
                rows.append(("clt_sum", text, n, mc.dkw_check(e, exact, cfg.alpha), None))
            # distance to the normal limit, for reference (not a pass/fail check)
            rows.append(("clt_vs_normal", text, n, None, mc.ks_distance(e, normal)))
    for k in cfg.kernels:
        K = parse_kernel(k)
        e = mc.sample_median_of_uniforms(K, cfg.samples, seed_for("kernel", k))
        rows.append(("median_of_uniforms", k, 1, mc.dkw_check(e, K.distribution, cfg.alpha), None))
    lines = ["check,dist,n,ks,bound,passed"]
    for check, dist, n, res, ks in rows:
        if res is None:
            lines.append(f'{check},"{dist}",{n},{reports.fmt(ks)},,')
        else:
            lines.append(f'{check},"{dist}",{n},{reports.fmt(res.ks)},{reports.fmt(res.bound)},'
                         f'{str(res.passed).lower()}')
    passed = all(r[3].passed for r in rows if r[3] is not None)
    out = {"csv": "\n".join(lines) + "\n"}
    if "json" in cfg.formats:
        out["json"] = reports.to_json([
            {"check": c, "dist": d, "n": n, "ks": (r.ks if r else ks),
             "bound": (r.bound if r else None), "passed": (r.passed if r else None)}
            for c, d, n, r, ks in rows])
    if "samples" in cfg.formats and first is not None:
        out["samples"] = "x\n" + "".join(reports.fmt(x) + "\n" for x in first.sorted_samples)
    return Outcome(passed, out)


def run_kernels(cfg):
    lines = ["kernel,dist,t,value,d1,d2"]
    for k in cfg.kernels:
        K = parse_kernel(k)
        grid = np.linspace(-1.25 * K.delta, 1.25 * K.delta, 201)
        vals = [kernel_derivative(K, grid, d) for d in range(K.order)]
        for i, t in enumerate(grid):
            d2 = reports.fmt(vals[2][i]) if K.order == 3 else ""
            lines.append(f'"{k}",,{reports.fmt(t)},{reports.fmt(vals[0][i])},'
                         f'{reports.fmt(vals[1][i])},{d2}')
        for text in cfg.dists:
            curve = smoothed_cdf_curve(K, parse_distribution(text), cfg.quad_tol)
            lo, hi = curve.range_for()
            lo, hi = max(lo, -50.0), min(hi, 50.0)
            ts = np.linspace(lo, hi, 401)
            for t, v in zip(ts, curve(ts)):
                lines.append(f'"{k}","{text}",{reports.fmt(t)},{reports.fmt(v)},,')
    return Outcome(True, {"csv": "\n".join(lines) + "\n"})


RUNNERS = dict(lemmas=run_lemmas, clt=run_clt, wlln=run_wlln, sandwich=run_sandwich, mc=run_mc,
               kernels=run_kernels)


def _emit(cfg, outcome, stdout):
    if cfg.out is None:
        if "svg" in cfg.formats:
            raise UsageError("svg output needs --out")
        for fmt in cfg.formats:
            if fmt in outcome.outputs:
                stdout.write(outcome.outputs[fmt])
        return
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise UsageError(f"cannot create output directory: {e}") from None
    for fmt, text in outcome.outputs.items():
        if fmt in cfg.formats or fmt == PRIMARY_FORMAT.get(cfg.command, "csv"):
            name = f"{cfg.command}_samples.csv" if fmt == "samples" else f"{cfg.command}.{fmt}"
            reports.write_atomic(out / name, text)


def _diagnose(stderr, code, exc, **extra):
    doc = {"exit_code": code, "error": type(exc).__name__, "message": str(exc), **extra}
    stderr.write(json.dumps(doc) + "\n")
    return code


def run(cfg, stdout=None, stderr=None):
    """Run one experiment; returns the process exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg.validate()
        outcome = RUNNERS[cfg.command](cfg)
        _emit(cfg, outcome, stdout)
    except CertificationError as e:
        return _diagnose(stderr, EXIT_NUMERIC, e, achieved=e.achieved)
    except (UsageError, ValueError, UncertifiableError, OSError) as e:
        return _diagnose(stderr, EXIT_USAGE, e)
    except ArithmeticError as e:
        return _diagnose(stderr, EXIT_NUMERIC, e)
    if not outcome.passed:
        stderr.write(json.dumps({"exit_code": EXIT_FAIL, "error": "VerdictFailed",
                                 "message": f"{cfg.command}: a verification verdict failed"}) + "\n")
        return EXIT_FAIL
    return EXIT_OK


def main(argv=None, stdout=None, stderr=None):
    stderr = stderr or sys.stderr
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except (UsageError, ValueError, TypeError) as e:
        return _diagnose(stderr, EXIT_USAGE, e)
    return run(cfg, stdout, stderr)


if __name__ == "__main__":
    sys.exit(main())
