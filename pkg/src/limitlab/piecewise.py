"""Piecewise polynomials on a sorted knot vector.

A :class:`PiecewisePoly` is constant (``left``) below the first knot, constant
(``right``) at and above the last knot, and on ``[knots[i], knots[i+1])`` is a
polynomial in the local variable ``t - knots[i]``.  Jumps at knots are allowed,
which is what distribution functions with atoms need.  Everything is
right-continuous; :meth:`PiecewisePoly.left_limit` gives the values from the
left.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as P

# Imaginary parts below this (in unit-scaled coordinates) count as real roots.
_ROOT_IMAG_TOL = 1e-7
ARGMAX_TIE = 1e-12


def taylor_shift(coeffs, d):
    """Return the coefficients of ``p(x + d)`` given those of ``p(x)``.

    Coefficients are in ascending powers.  Horner's scheme in polynomial
    arithmetic; O(deg^2), which is fine for the degrees used here (<= 64).
    """
    c = np.asarray(coeffs, dtype=float)
    if c.size <= 1 or d == 0.0:
        return c.copy()
    out = np.array([c[-1]])
    for ck in c[-2::-1]:
        new = np.zeros(out.size + 1)
        new[1:] += out
        new[:-1] += d * out
        new[0] += ck
        out = new
    return out


def scale_argument(coeffs, a):
    """Coefficients of ``p(a * x)``."""
    c = np.asarray(coeffs, dtype=float)
    return c * a ** np.arange(c.size)


def trim(coeffs, rel=1e-15):
    """Drop top-degree coefficients that are negligible relative to the rest."""
    c = np.asarray(coeffs, dtype=float)
    if c.size == 0:
        return np.zeros(1)
    big = np.max(np.abs(c))
    if big == 0.0:
        return np.zeros(1)
    k = c.size
    while k > 1 and abs(c[k - 1]) <= rel * big:
        k -= 1
    return c[:k]


def real_roots_in(coeffs, width):
    """Real roots of a polynomial (local variable) lying in ``(0, width)``.

    The search is done in the unit-scaled variable ``u = s / width`` so that
    the companion matrix stays balanced.
    """
    if width <= 0.0:
        return np.empty(0)
    c = trim(scale_argument(coeffs, width))
    if c.size <= 1:
        return np.empty(0)
    r = P.polyroots(c)
    keep = np.abs(r.imag) <= _ROOT_IMAG_TOL
    u = r.real[keep]
    u = u[(u > 0.0) & (u < 1.0)]
    return np.sort(u) * width


class PiecewisePoly:
    """Right-continuous piecewise polynomial with constant tails."""

    __slots__ = ("knots", "C", "left", "right")

    def __init__(self, knots, coeffs, left=0.0, right=0.0):
        knots = np.atleast_1d(np.asarray(knots, dtype=float))
        if knots.size < 1:
            raise ValueError("need at least one knot")
        if np.any(np.diff(knots) <= 0):
            raise ValueError("knots must be strictly increasing")
        m = knots.size - 1
        coeffs = list(coeffs)
        if len(coeffs) != m:
            raise ValueError(f"expected {m} polynomial pieces, got {len(coeffs)}")
        deg = max((len(np.atleast_1d(c)) for c in coeffs), default=1)
        C = np.zeros((m, deg))
        for i, c in enumerate(coeffs):
            c = np.atleast_1d(np.asarray(c, dtype=float))
            C[i, : c.size] = c
        self.knots = knots
        self.C = C
        self.left = float(left)
        self.right = float(right)

    @classmethod
    def constant(cls, value, at=0.0):
        return cls([at], [], left=value, right=value)

    @property
    def n_pieces(self):
        return self.knots.size - 1

    @property
    def widths(self):
        return np.diff(self.knots)

    @property
    def degree(self):
        return self.C.shape[1] - 1

    def __repr__(self):
        return (f"PiecewisePoly(pieces={self.n_pieces}, degree={self.degree}, "
                f"range=[{self.knots[0]:g}, {self.knots[-1]:g}])")

    def _eval(self, t, idx):
        m = self.n_pieces
        out = np.empty(t.shape)
        below = idx < 0
        above = idx >= m
        inside = ~(below | above)
        out[below] = self.left
        out[above] = self.right
        if np.any(inside):
            j = idx[inside]
            s = t[inside] - self.knots[j]
            acc = self.C[j, -1].copy()
            for k in range(self.C.shape[1] - 2, -1, -1):
                acc = acc * s + self.C[j, k]
            out[inside] = acc
        return out

    def __call__(self, t):
        ta = np.asarray(t, dtype=float)
        flat = np.atleast_1d(ta).ravel()
        idx = np.searchsorted(self.knots, flat, side="right") - 1
        out = self._eval(flat, idx)
        return float(out[0]) if ta.ndim == 0 else out.reshape(ta.shape)

    def left_limit(self, t):
        ta = np.asarray(t, dtype=float)
        flat = np.atleast_1d(ta).ravel()
        idx = np.searchsorted(self.knots, flat, side="left") - 1
        out = self._eval(flat, idx)
        return float(out[0]) if ta.ndim == 0 else out.reshape(ta.shape)

    def piece(self, i):
        return trim(self.C[i], rel=0.0)

    def derivative(self):
        pieces = [P.polyder(self.C[i]) if self.C.shape[1] > 1 else np.zeros(1)
                  for i in range(self.n_pieces)]
        return PiecewisePoly(self.knots, pieces, 0.0, 0.0)

    def refine(self, knots):
        """Re-express on a knot vector that contains ``self.knots``."""
        knots = np.asarray(knots, dtype=float)
        m = self.n_pieces
        pieces = []
        for a in knots[:-1]:
            j = int(np.searchsorted(self.knots, a, side="right")) - 1
            if j < 0:
                pieces.append(np.array([self.left]))
            elif j >= m:
                pieces.append(np.array([self.right]))
            else:
                pieces.append(taylor_shift(self.C[j], a - self.knots[j]))
        return PiecewisePoly(knots, pieces, self.left, self.right)

    def _binary(self, other, op):
        if not isinstance(other, PiecewisePoly):
            other = PiecewisePoly.constant(float(other), at=self.knots[0])
        knots = np.union1d(self.knots, other.knots)
        a = self.refine(knots)
        b = other.refine(knots)
        deg = max(a.C.shape[1], b.C.shape[1])
        Ca = np.zeros((a.n_pieces, deg))
        Cb = np.zeros((b.n_pieces, deg))
        Ca[:, : a.C.shape[1]] = a.C
        Cb[:, : b.C.shape[1]] = b.C
        return PiecewisePoly(knots, list(op(Ca, Cb)),
                             op(a.left, b.left), op(a.right, b.right))

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return PiecewisePoly.constant(float(other), self.knots[0]) - self

    __radd__ = __add__

    def __mul__(self, c):
        c = float(c)
        return PiecewisePoly(self.knots, list(self.C * c), self.left * c, self.right * c)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def candidates(self):
        """Points and values where ``sup |p|`` can be attained.

        Returns ``(t, v)``: piece start values, left limits at piece ends,
        interior critical points, and the two constant tails (reported at the
        extreme knots).
        """
        ts = [self.knots[0], self.knots[-1]]
        vs = [self.left, self.right]
        for i in range(self.n_pieces):
            a = self.knots[i]
            w = self.knots[i + 1] - a
            c = self.C[i]
            ts.append(a)
            vs.append(c[0])
            ts.append(a + w)
            vs.append(P.polyval(w, c))
            if c.size > 2:
                for r in real_roots_in(P.polyder(c), w):
                    ts.append(a + r)
                    vs.append(P.polyval(r, c))
        return np.asarray(ts), np.asarray(vs)

    def sup_abs(self):
        """Exact ``sup_t |p(t)|`` and the smallest ``t`` attaining it."""
        ts, vs = self.candidates()
        av = np.abs(vs)
        best = float(av.max())
        hit = av >= best - ARGMAX_TIE
        return best, float(ts[hit].min())

    def max_value(self):
        ts, vs = self.candidates()
        return float(vs.max())
