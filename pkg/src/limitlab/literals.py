"""Text literals for laws and kernels.

Grammar (numbers are decimals, optionally signed, or ``sqrt(decimal)``)::

    rademacher | normal | exp1
    uniform:a,b
    det:c
    atoms:x1:p1,x2:p2,...
    threepoint:x1,x2,x3,p1,p2,p3
    beta:k,delta

Probabilities are parsed as exact fractions and must sum to exactly 1.
Errors carry the 1-based column of the offending token.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .distcore import Distribution
from .errors import PreconditionError
from .smoothkernel import make_smoother

_NUMBER = re.compile(r"\s*(-?)(?:sqrt\(\s*([0-9.eE+-]+)\s*\)|([0-9.eE+-]+))\s*$")


class LiteralError(PreconditionError):
    def __init__(self, text, column, message):
        self.text = text
        self.column = column
        super().__init__(f"{message} at column {column} of {text!r}")


def _tokens(text, start, body, sep=","):
    """Split ``body`` on ``sep``, yielding ``(token, column)`` pairs."""
    col = start
    for part in body.split(sep):
        yield part, col
        col += len(part) + len(sep)


def _exact(text, tok, col):
    """Exact rational value of a plain decimal token."""
    try:
        return Fraction(tok.strip())
    except (ValueError, ZeroDivisionError):
        raise LiteralError(text, col, f"expected a decimal number, got {tok.strip()!r}") from None


def _number(text, tok, col):
    m = _NUMBER.match(tok)
    if not m:
        raise LiteralError(text, col, f"expected a number, got {tok.strip()!r}")
    sign = -1.0 if m.group(1) else 1.0
    if m.group(2) is not None:
        v = float(_exact(text, m.group(2), col))
        if v < 0:
            raise LiteralError(text, col, "square root of a negative number")
        return sign * math.sqrt(v)
    return sign * float(_exact(text, m.group(3), col))


def _probabilities(text, items):
    ps = []
    for tok, col in items:
        p = _exact(text, tok, col)
        if p < 0 or p > 1:
            raise LiteralError(text, col, f"probability {tok.strip()} outside [0, 1]")
        ps.append(p)
    if sum(ps) != 1:
        raise LiteralError(text, items[0][1], f"probabilities sum to {sum(ps)}, not exactly 1")
    return [float(p) for p in ps]


def _split(text):
    s = text.strip()
    if not s:
        raise LiteralError(text, 1, "empty literal")
    lead = len(text) - len(text.lstrip())
    name, colon, body = s.partition(":")
    return s, name.strip().lower(), body, lead + len(name) + 2, bool(colon)


def _arity(text, items, n, col, what):
    if len(items) != n:
        raise LiteralError(text, col, f"{what} needs {n} values, got {len(items)}")


def parse_distribution(text):
    """Parse a law literal into a :class:`Distribution` labelled with the literal."""
    s, name, body, col, has_args = _split(text)
    if name in ("rademacher", "normal", "exp1"):
        if has_args:
            raise LiteralError(text, col - 1, f"{name} takes no parameters")
        d = {"rademacher": Distribution.rademacher, "normal": Distribution.normal,
             "exp1": Distribution.exp1}[name]()
        d.label = s
        return d
    if not has_args:
        raise LiteralError(text, 1, f"unknown law {name!r}" if name not in _WITH_ARGS
                           else f"{name} needs parameters after ':'")
    items = list(_tokens(text, col, body))
    if name == "uniform":
        _arity(text, items, 2, col, "uniform")
        a, b = (_number(text, t, c) for t, c in items)
        if not a < b:
            raise LiteralError(text, items[1][1], "uniform needs a < b")
        return Distribution.uniform(a, b, label=s)
    if name == "det":
        _arity(text, items, 1, col, "det")
        return Distribution.deterministic(_number(text, *items[0]), label=s)
    if name == "atoms":
        xs, pitems = [], []
        for tok, c in items:
            x, sep, p = tok.partition(":")
            if not sep:
                raise LiteralError(text, c, "atoms entries look like location:probability")
            xs.append((_number(text, x, c), c))
            pitems.append((p, c + len(x) + 1))
        ps = _probabilities(text, pitems)
        locs = [x for x, _ in xs]
        if len(set(locs)) != len(locs):
            raise LiteralError(text, col, "atom locations must be distinct")
        return Distribution.from_atoms(locs, ps, label=s)
    if name == "threepoint":
        _arity(text, items, 6, col, "threepoint")
        xs = [_number(text, t, c) for t, c in items[:3]]
        if len(set(xs)) != 3:
            raise LiteralError(text, col, "threepoint locations must be distinct")
        ps = _probabilities(text, items[3:])
        return Distribution.three_point(xs, ps, label=s)
    raise LiteralError(text, 1, f"unknown law {name!r}")


_WITH_ARGS = ("uniform", "det", "atoms", "threepoint")


def parse_kernel(text):
    """Parse ``beta:k,delta`` into a :class:`BetaSmoother`."""
    s, name, body, col, has_args = _split(text)
    if name != "beta" or not has_args:
        raise LiteralError(text, 1, f"expected a kernel literal beta:k,delta, got {s!r}")
    items = list(_tokens(text, col, body))
    _arity(text, items, 2, col, "beta")
    k_tok, k_col = items[0]
    if k_tok.strip() not in ("2", "3"):
        raise LiteralError(text, k_col, f"kernel order must be 2 or 3, got {k_tok.strip()!r}")
    delta = _number(text, *items[1])
    if not delta > 0:
        raise LiteralError(text, items[1][1], "kernel half-width must be positive")
    return make_smoother(delta, int(k_tok))
