"""Brute-force references used to cross-check the closed-form paths.

Nothing here calls into the transform or analytic formulas it is meant to
verify: polynomials are evaluated from their own roots or raw coefficients,
integrals are computed by adaptive Gauss-Legendre panels, and set partitions
are enumerated one by one.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Tuple

import mpmath
import numpy as np

PARTITION_MAX_N = 12
_GL_ORDER = 20
_MAX_DOUBLINGS = 12
_TAIL_DROP = 40.0


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    est_error: float
    panels: int
    log_value: float = math.nan


@dataclass(frozen=True)
class BoundCertificate:
    """``lower <= value <= upper`` together with the smaller margin."""

    name: str
    lower: float
    value: float
    upper: float
    holds: bool
    slack: float

    @classmethod
    def build(cls, name, lower, value, upper, rtol=0.0):
        slack = min(value - lower, upper - value)
        scale = max(abs(lower), abs(value), abs(upper) if math.isfinite(upper) else 0.0)
        holds = slack >= -rtol * scale
        return cls(name, float(lower), float(value), float(upper), bool(holds), float(slack))

    def line(self) -> str:
        status = "HOLDS" if self.holds else "FAILS"
        return (
            f"{self.name}: {status}  lower={self.lower:.10g}  value={self.value:.10g}"
            f"  upper={self.upper:.10g}  slack={self.slack:.3e}"
        )


# --------------------------------------------------------------------------
# quadrature

_nodes, _weights = np.polynomial.legendre.leggauss(_GL_ORDER)


def _gl_panel(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x = mid + half * _nodes
    return half * float(np.dot(_weights, f(x)))


def integrate_panels(f, a: float, b: float, rtol: float = 1e-12, max_panels: int = 20000):
    """Adaptive Gauss-Legendre integral of a vectorized ``f`` over ``[a, b]``.

    Each panel is compared against its two halves and split until the
    difference is within its share of ``rtol * |integral|``.
    """
    coarse = np.linspace(a, b, 65)
    rough = sum(_gl_panel(f, coarse[i], coarse[i + 1]) for i in range(64))
    atol = rtol * abs(rough) if rough != 0 else rtol
    width = b - a
    stack = [(coarse[i], coarse[i + 1], _gl_panel(f, coarse[i], coarse[i + 1])) for i in range(64)]
    total, err, panels = 0.0, 0.0, 0
    parts = []
    while stack:
        lo, hi, whole = stack.pop()
        mid = 0.5 * (lo + hi)
        left, right = _gl_panel(f, lo, mid), _gl_panel(f, mid, hi)
        diff = abs(left + right - whole)
        if diff <= atol * (hi - lo) / width or hi - lo < 1e-14 * width:
            parts.append(left + right)
            err += diff
            panels += 1
        else:
            stack.append((lo, mid, left))
            stack.append((mid, hi, right))
        if len(parts) + len(stack) > max_panels:
            raise QuadratureError("panel budget exhausted")
    total = math.fsum(parts)
    return total, err, panels


def _golden_max(g, lo, hi, iters=200):
    inv = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - inv * (b - a), a + inv * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(iters):
        if b - a < 1e-13 * (1 + abs(a)):
            break
        if gc < gd:
            a, c, gc = c, d, gd
            d = a + inv * (b - a)
            gd = g(d)
        else:
            b, d, gd = d, c, gc
            c = b - inv * (b - a)
            gc = g(c)
    x = 0.5 * (a + b)
    return x, g(x)


def integrate_exp_concave(log_f: Callable, peak_x: float, peak_log: float,
                          start: float = 0.0, rtol: float = 1e-10) -> QuadratureResult:
    """Integrate ``exp(log_f)`` over ``[start, inf)`` for concave ``log_f``.

    The upper limit doubles until ``log_f`` has fallen 40 below its peak;
    the integrand is rescaled by ``exp(-peak_log)`` before summation.
    """
    X = max(2.0 * peak_x, peak_x + 1.0, start + 1.0)
    for _ in range(_MAX_DOUBLINGS + 1):
        if log_f(np.array([X]))[0] < peak_log - _TAIL_DROP:
            break
        X = start + 2.0 * (X - start)
    else:
        raise QuadratureError("integrand did not decay within the doubling cap")

    def scaled(x):
        return np.exp(log_f(x) - peak_log)

    # split at the peak so the first panels resolve it
    pieces = [(start, peak_x), (peak_x, X)] if start < peak_x < X else [(start, X)]
    total, err, panels = 0.0, 0.0, 0
    for a, b in pieces:
        v, e, n = integrate_panels(scaled, a, b, rtol=rtol * 0.1)
        total += v
        err += e
        panels += n
    if err > 1e-8 * abs(total):
        raise QuadratureError(f"estimated error {err:.3e} too large")
    log_value = math.log(total) + peak_log
    value = math.exp(log_value) if log_value < 700 else math.inf
    rel = err / total
    return QuadratureResult(value, float(rel * value) if math.isfinite(value) else math.inf, panels, log_value)


def _log_poly_independent(p):
    """Vectorized ``log p(x)`` on ``x >= 0`` without the library's evaluators."""
    if p.roots is not None:
        roots = np.array([float(r) for r in p.roots])
        return lambda x: np.sum(np.log(np.subtract.outer(np.asarray(x, float), roots)), axis=-1)
    N = p.degree
    mono = []
    for k, e in enumerate(p.etilde):
        c = float(e) * math.comb(N, k)
        mono.append(-c if k % 2 else c)
    # mono[k] multiplies x^(N-k)
    mono = np.array(mono)
    lmax = max(abs(c) for c in mono)

    def log_p(x):
        x = np.asarray(x, float)
        acc = np.zeros_like(x)
        for c in mono:
            acc = acc * x + c / lmax
        # a root at 0 gives log 0 = -inf at the endpoint, which the integrand maps to 0
        with np.errstate(divide="ignore"):
            return np.log(acc) + math.log(lmax)

    return log_p


def quad_laplace(p, s: float, N_scale: int = 1, rtol: float = 1e-10) -> QuadratureResult:
    """Numerical ``int_0^inf p(x) exp(-N_scale s x) dx`` for negative-rooted ``p``."""
    if s <= 0:
        raise ValueError("s must be positive")
    if p.roots is not None and any(float(r) >= 0 for r in p.roots):
        raise ValueError("all roots must be strictly negative")
    log_p = _log_poly_independent(p)
    rate = N_scale * float(s)

    def log_f(x):
        return log_p(x) - rate * np.asarray(x, float)

    # the log integrand is concave; its maximizer lies below N / rate
    hi = p.degree / rate + 1.0
    g = lambda x: float(log_f(np.array([x]))[0])
    x_peak, v_peak = _golden_max(g, 0.0, hi)
    if g(0.0) > v_peak:
        x_peak, v_peak = 0.0, g(0.0)
    return integrate_exp_concave(log_f, x_peak, v_peak, start=0.0, rtol=rtol)


# --------------------------------------------------------------------------
# set partitions

def restricted_growth_strings(n: int) -> Iterator[Tuple[int, ...]]:
    """All RGS ``a`` of length ``n`` (``a[0] = 0``, ``a[i] <= 1 + max(a[:i])``)."""
    if n == 0:
        yield ()
        return
    a = [0] * n
    m = [0] * n  # m[i] = max(a[:i+1])
    while True:
        yield tuple(a)
        i = n - 1
        while i > 0 and a[i] > m[i - 1]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        m[i] = max(m[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            m[j] = m[i]


def mobius_to_top(blocks: int) -> int:
    """Moebius function ``mu(pi, 1_n)`` for a partition with ``blocks`` blocks."""
    return (-1) ** (blocks - 1) * math.factorial(blocks - 1)


def enumerate_partitions(n: int) -> List[Tuple[Tuple[Tuple[int, ...], ...], int]]:
    """Set partitions of ``{1..n}`` paired with ``mu(pi, 1_n)``."""
    if n > PARTITION_MAX_N:
        raise ValueError(f"n={n} exceeds the enumeration cap {PARTITION_MAX_N}")
    out = []
    for rgs in restricted_growth_strings(n):
        k = max(rgs) + 1 if rgs else 0
        blocks = [[] for _ in range(k)]
        for i, b in enumerate(rgs, start=1):
            blocks[b].append(i)
        out.append((tuple(tuple(b) for b in blocks), mobius_to_top(k)))
    return out


def integer_partitions(n: int, largest: int = None) -> Iterator[Tuple[int, ...]]:
    """Nonincreasing tuples of positive integers summing to ``n``."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - k, k):
            yield (k,) + rest


def set_partitions_of_type(sizes: Tuple[int, ...]) -> int:
    """Number of set partitions of ``{1..sum(sizes)}`` with these block sizes."""
    count = math.factorial(sum(sizes))
    for b in sizes:
        count //= math.factorial(b)
    for m in Counter(sizes).values():
        count //= math.factorial(m)
    return count


@lru_cache(maxsize=None)
def partition_type_weights(n: int) -> Dict[Tuple[int, ...], int]:
    """Total Moebius weight per block-size multiset over all of ``P(n)``.

    Every partition of a given type has the same weight, so the sum is the
    type count times ``mu``; the result agrees with grouping
    :func:`enumerate_partitions` by type.
    """
    if n > PARTITION_MAX_N:
        raise ValueError(f"n={n} exceeds the enumeration cap {PARTITION_MAX_N}")
    return {lam: set_partitions_of_type(lam) * mobius_to_top(len(lam)) for lam in integer_partitions(n)}


# --------------------------------------------------------------------------
# calculus and Stirling

def finite_diff(f: Callable[[float], float], x: float, h: float) -> float:
    return (f(x + h) - f(x - h)) / (2 * h)


def stirling_bound_check(N: int) -> BoundCertificate:
    """``N! e^N / N^(N+1) <= exp(1/(12N)) sqrt(2 pi / N)``, in the log domain.

    The two sides differ by about ``1/(360 N^3)`` in log, below double
    precision for large ``N``, so the logs are formed at 40 digits.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    with mpmath.workdps(40):
        n = mpmath.mpf(N)
        log_lhs = mpmath.loggamma(n + 1) + n - (n + 1) * mpmath.log(n)
        log_rhs = 1 / (12 * n) + (mpmath.log(2 * mpmath.pi) - mpmath.log(n)) / 2
        gap = float(log_rhs - log_lhs)
    lhs, rhs = math.exp(float(log_lhs)), math.exp(float(log_rhs))
    return BoundCertificate(
        name=f"stirling(N={N})",
        lower=-math.inf,
        value=lhs,
        upper=rhs,
        holds=gap >= 0,
        slack=gap,
    )
