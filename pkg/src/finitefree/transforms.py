"""FFF transform, finite R-transform and finite free cumulants.

For a degree-``N`` polynomial ``p`` the FFF transform is the polynomial

    phat(s) = sum_k (-1)**k etilde[k] s**k / k!

and the finite R-transform is ``R(s) = -phat'(N s) / phat(N s)``. Its Taylor
coefficients are the finite free cumulants ``kappa_1..kappa_N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .oracles import partition_type_weights
from .polycore import MonicPoly, is_exact
from .series import TruncatedSeries

MOBIUS_MAX_N = 12


class PoleError(ArithmeticError):
    """Raised when ``phat(N s)`` vanishes."""


@dataclass(frozen=True)
class CumulantVector:
    kappa: Tuple
    source_degree: int

    def __len__(self):
        return len(self.kappa)

    def __getitem__(self, n):
        """1-based access: ``cv[1]`` is the mean."""
        if n < 1:
            raise IndexError("cumulants are indexed from 1")
        return self.kappa[n - 1]

    def c(self, n: int):
        """Unscaled coefficient ``c_n`` of the logarithmic FFF transform."""
        N = self.source_degree
        return self[n] * math.factorial(n - 1) / (-N) ** (n - 1)


def _signed_etilde(p: MonicPoly):
    # a_k = (-1)^k etilde_k; all positive when every root is negative
    return [-e if k % 2 else e for k, e in enumerate(p.etilde)]


def fff(p: MonicPoly) -> TruncatedSeries:
    a = _signed_etilde(p)
    if p.exact:
        return TruncatedSeries(Fraction(c, math.factorial(k)) for k, c in enumerate(a))
    return TruncatedSeries(c / math.factorial(k) for k, c in enumerate(a))


def fff_linearization_check(p: MonicPoly, q: MonicPoly) -> bool:
    """``fff(p boxplus q) == fff(p) * fff(q)`` modulo ``s**(N+1)``."""
    from .convolution import boxplus

    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} != {q.degree}")
    r = boxplus(p, q)
    return fff(r).equals_mod(fff(p) * fff(q), p.degree)


def apply_fff_operator(p: MonicPoly) -> Tuple:
    """Apply the differential operator ``phat(d/dx)`` to ``x**N``.

    Returns ascending monomial coefficients; the result reproduces ``p``.
    """
    N = p.degree
    a = fff(p).coeffs
    out = [0] * (N + 1)
    for k in range(N + 1):
        # d^k/dx^k x^N = N!/(N-k)! x^(N-k)
        out[N - k] = a[k] * (math.factorial(N) // math.factorial(N - k))
    return tuple(out)


def _nested_horner(a, u, step):
    """Evaluate ``sum_k a[k] prod_{j<k} (u / step(j))`` with a tracked exponent.

    Returns ``(mantissa, exponent)`` with value ``mantissa * 2**exponent``.
    Factorials never materialize, so large ``u`` and high degree stay finite.
    """
    m, e = math.frexp(float(a[-1]))
    for k in range(len(a) - 2, -1, -1):
        m = m * (u / step(k)) + math.ldexp(float(a[k]), -e)
        m, de = math.frexp(m)
        e += de
    return m, e


def _fff_and_derivative(p: MonicPoly, u):
    a = _signed_etilde(p)
    N = p.degree
    if p.exact and is_exact(u):
        val = a[N]
        for k in range(N - 1, -1, -1):
            val = a[k] + val * u / (k + 1)
        der = a[N]
        for k in range(N - 1, 0, -1):
            der = a[k] + der * u / k
        return val, der
    return None


def log_fff_at(p: MonicPoly, u: float) -> float:
    """``log phat(u)``; requires ``phat(u) > 0``."""
    m, e = _nested_horner(_signed_etilde(p), float(u), lambda k: k + 1)
    if m <= 0:
        raise PoleError(f"phat({u}) is not positive")
    return math.log(m) + e * math.log(2.0)


def finite_R(p: MonicPoly, s):
    """Finite R-transform ``-phat'(N s) / phat(N s)``.

    Exact when ``p`` is exact and ``s`` is rational; otherwise float with
    exponent-tracked Horner sums so ``N s`` in the hundreds does not overflow.
    """
    N = p.degree
    u = N * s
    exact = _fff_and_derivative(p, u)
    if exact is not None:
        val, der = exact
        if val == 0:
            raise PoleError(f"phat vanishes at N*s = {u}")
        return -der / val
    a = _signed_etilde(p)
    u = float(u)
    m0, e0 = _nested_horner(a, u, lambda k: k + 1)
    if m0 == 0:
        raise PoleError(f"phat vanishes at N*s = {u}")
    # phat'(u) has the same nested form on the shifted coefficients
    m1, e1 = _nested_horner(a[1:], u, lambda k: k + 1)
    return -math.ldexp(m1 / m0, e1 - e0)


def finite_R_series(p: MonicPoly, order: int = None) -> TruncatedSeries:
    """Taylor series of ``finite_R(p, .)`` at 0 by series division."""
    N = p.degree
    order = N - 1 if order is None else order
    ph = fff(p)
    pad = ph.truncate(order + 1).scale_argument(N)
    # d/ds phat(N s) = N phat'(N s)
    num = TruncatedSeries(c / N for c in pad.derivative().coeffs)
    den = pad.truncate(order)
    return -(num / den)


def log_fff(p: MonicPoly) -> TruncatedSeries:
    """Logarithmic FFF transform ``log phat`` modulo ``s**(N+1)``."""
    return fff(p).log()


def _rescale(c_n, n, N):
    scale = (-N) ** (n - 1)
    fact = math.factorial(n - 1)
    if is_exact(c_n):
        return Fraction(scale, fact) * c_n
    return scale * c_n / fact


def finite_cumulants_logseries(p: MonicPoly) -> CumulantVector:
    """Cumulants from the logarithmic FFF transform.

    In floats ``kappa_n`` carries a factor ``N**(n-1)/(n-1)!`` over a sum with
    heavy cancellation, so orders beyond about 8 lose all digits; pass
    ``to_exact(p)`` when high orders matter.
    """
    N = p.degree
    C = log_fff(p)
    kappa = []
    for n in range(1, N + 1):
        # C = sum (-1)^n c_n s^n / n!
        c_n = C[n] * math.factorial(n)
        if n % 2:
            c_n = -c_n
        kappa.append(_rescale(c_n, n, N))
    return CumulantVector(tuple(kappa), N)


def finite_cumulants_mobius(p: MonicPoly, max_n: int = None) -> CumulantVector:
    """Cumulants from the set-partition Moebius sum.

    ``c_n = sum_{pi in P(n)} etilde_pi * mu(pi, 1_n)``; enumeration grows like
    the Bell numbers so ``max_n`` is capped at 12.
    """
    N = p.degree
    max_n = min(N, MOBIUS_MAX_N) if max_n is None else max_n
    if max_n > min(N, MOBIUS_MAX_N):
        raise ValueError(f"max_n={max_n} exceeds min(N, {MOBIUS_MAX_N}) = {min(N, MOBIUS_MAX_N)}")
    e = p.etilde
    kappa = []
    for n in range(1, max_n + 1):
        c_n = 0
        for sizes, weight in partition_type_weights(n).items():
            term = weight
            for b in sizes:
                term = term * e[b]
            c_n += term
        kappa.append(_rescale(c_n, n, N))
    return CumulantVector(tuple(kappa), N)


def laplace_closed_form(p: MonicPoly, t):
    """``int_0^inf p(x) exp(-t x) dx`` from monomial transforms ``j!/t**(j+1)``."""
    c = p.coefficients()
    terms = [c[j] * math.factorial(j) / t ** (j + 1) for j in range(len(c))]
    if p.exact and is_exact(t):
        return sum(terms, Fraction(0))
    return math.fsum(terms)


def laplace_fff_identity(p: MonicPoly, s):
    """Both sides of ``phat(s) = s**(N+1) / N! * Lap[p](s)``.

    Positive roots are rejected; roots at zero are allowed (``x**N`` gives
    ``1 == 1``). Coefficient-only inputs are screened by requiring nonnegative
    monomial coefficients.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    if p.roots is not None:
        if any(r > 0 for r in p.roots):
            raise ValueError("roots must be nonpositive")
    elif any(c < 0 for c in p.coefficients()):
        raise ValueError("polynomial has a positive root")
    N = p.degree
    lhs = fff(p)(s)
    lap = laplace_closed_form(p, s)
    if p.exact and is_exact(s):
        rhs = Fraction(s) ** (N + 1) / math.factorial(N) * lap
    else:
        rhs = math.exp((N + 1) * math.log(s) - math.lgamma(N + 1)) * lap
    return lhs, rhs
