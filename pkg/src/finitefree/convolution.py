"""Finite free additive convolution and its superadditivity correction."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polycore import MonicPoly, eval_poly, is_exact
from .series import TruncatedSeries
from .transforms import fff, finite_R


def boxplus(p: MonicPoly, q: MonicPoly) -> MonicPoly:
    """``etilde_k(p boxplus q) = sum_i C(k, i) etilde_i(p) etilde_{k-i}(q)``."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} != {q.degree}")
    N = p.degree
    a, b = p.etilde, q.etilde
    exact = p.exact and q.exact
    out = []
    for k in range(N + 1):
        terms = [math.comb(k, i) * a[i] * b[k - i] for i in range(k + 1)]
        out.append(sum(terms) if exact else math.fsum(terms))
    return MonicPoly(N, tuple(out))


@dataclass(frozen=True)
class SuperadditivityReport:
    s: float
    lhs: float
    rhs_sum: float
    gap: float
    correction: float
    one_minus_g: float

    @property
    def consistent(self) -> bool:
        if is_exact(self.gap) and is_exact(self.correction):
            return self.gap == self.correction
        return abs(self.gap - self.correction) <= 1e-10 * max(abs(self.lhs), abs(self.rhs_sum), 1e-300)


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_eval(c, x):
    acc = 0
    for v in reversed(c):
        acc = acc * x + v
    return acc


def _poly_der(c):
    return [j * c[j] for j in range(1, len(c))] or [0]


def correction_polynomial(p: MonicPoly, q: MonicPoly):
    """Coefficients of ``f = phat * qhat - rhat`` (ascending; zero below degree N+1)."""
    r = boxplus(p, q)
    pq = _poly_mul(fff(p).coeffs, fff(q).coeffs)
    rh = list(fff(r).coeffs) + [0] * (len(pq) - p.degree - 1)
    f = [x - y for x, y in zip(pq, rh)]
    # degrees <= N cancel identically (linearization); drop float residue
    zero = f[0] * 0
    return [zero] * (p.degree + 1) + f[p.degree + 1:], r


def superadditivity_report(p: MonicPoly, q: MonicPoly, s) -> SuperadditivityReport:
    """Compare ``R_{p boxplus q}`` with ``R_p + R_q`` and the closed-form gap.

    With ``g = f / (phat qhat)`` the gap equals ``g'(N s) / (1 - g(N s))``,
    evaluated here as ``(f' rhat - f rhat') / (phat qhat rhat)``.
    """
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} != {q.degree}")
    for poly in (p, q):
        if poly.roots is not None:
            if any(rt >= 0 for rt in poly.roots):
                raise ValueError("nonnegative root detected")
        elif any(c <= 0 for c in poly.coefficients()):
            raise ValueError("nonnegative root detected")
    if s <= 0:
        raise ValueError("s must be positive")
    N = p.degree
    f, r = correction_polynomial(p, q)
    ph, qh, rh = fff(p).coeffs, fff(q).coeffs, fff(r).coeffs
    u = N * s
    P, Q, Rr = _poly_eval(ph, u), _poly_eval(qh, u), _poly_eval(rh, u)
    F, dF, dR = _poly_eval(f, u), _poly_eval(_poly_der(f), u), _poly_eval(_poly_der(rh), u)
    # f carries only the terms above degree N, so g keeps full relative accuracy
    g = F / (P * Q)
    one_minus_g = 1 - g
    if not (0 < g < 1 or (g == 0 and (F == 0 or not is_exact(g)))):
        raise ArithmeticError(f"g(Ns) = {g} outside (0, 1)")
    correction = (dF * Rr - F * dR) / (P * Q * Rr)
    lhs = finite_R(r, s)
    rhs_sum = finite_R(p, s) + finite_R(q, s)
    return SuperadditivityReport(s, lhs, rhs_sum, lhs - rhs_sum, correction, one_minus_g)


def roots_in_interval(r: MonicPoly, lo: float, hi: float, resolution: float = None) -> bool:
    """Check that all ``N`` real roots of ``r`` lie in ``[lo, hi]``.

    Counts sign changes of ``r`` on a uniform grid over ``[lo - 1, hi + 1]``;
    ``N`` crossings must occur inside ``[lo, hi]`` (up to one grid step) and
    none outside.
    """
    N = r.degree
    if resolution is None:
        resolution = 1e-3 * (hi - lo)
    xs = np.arange(lo - 1.0, hi + 1.0 + resolution, resolution)
    coeffs = [float(c) for c in r.coefficients()]
    vals = np.polynomial.polynomial.polyval(xs, coeffs)
    sign = np.sign(vals)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    crossings = 0.5 * (xs[idx] + xs[idx + 1])
    # an exact zero on the grid counts as a crossing
    zeros = xs[sign == 0]
    points = np.concatenate([crossings, zeros])
    tol = resolution
    inside = np.count_nonzero((points >= lo - tol) & (points <= hi + tol))
    return inside == N and len(points) == N
