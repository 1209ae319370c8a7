"""Monic polynomials in normalized elementary-symmetric coordinates.

A degree-``N`` monic polynomial is stored through the coefficients

    p(x) = sum_k x**(N-k) * (-1)**k * C(N, k) * etilde[k]

where ``etilde[k] = e_k(roots) / C(N, k)``. Two scalar backends share the same
code: exact rationals (:class:`fractions.Fraction`) and binary floats. The
backend is inferred from the inputs; ``int`` and ``Fraction`` inputs stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence, Tuple, Union

Scalar = Union[Fraction, float]

# Exact arithmetic is only promised up to this degree.
EXACT_MAX_DEGREE = 200


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def to_scalar(x, exact: bool) -> Scalar:
    """Coerce ``x`` into the requested backend.

    Strings are parsed as decimals or ``p/q`` rationals. Floats converted to the
    exact backend keep their binary value.
    """
    if isinstance(x, str):
        x = x.strip()
        return Fraction(x) if exact else float(Fraction(x))
    if exact:
        return Fraction(x)
    return float(x)


@dataclass(frozen=True)
class MonicPoly:
    """Degree-``N`` monic polynomial.

    Parameters
    ----------
    degree : int
        ``N >= 1``.
    etilde : tuple
        Normalized coefficients ``etilde[0..N]`` with ``etilde[0] == 1``.
    roots : tuple or None
        Actual roots of ``p`` when known, so that ``p(x) = prod(x - root)``.
    """

    degree: int
    etilde: Tuple[Scalar, ...]
    roots: Optional[Tuple[Scalar, ...]] = None

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be at least 1")
        if len(self.etilde) != self.degree + 1:
            raise ValueError(
                f"etilde has length {len(self.etilde)}, expected {self.degree + 1}"
            )
        if self.etilde[0] != 1:
            raise ValueError("etilde[0] must equal 1 (monic polynomial)")
        if self.roots is not None and len(self.roots) != self.degree:
            raise ValueError("number of roots does not match the degree")

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self.etilde)

    @property
    def has_roots(self) -> bool:
        return self.roots is not None

    def coefficients(self) -> Tuple[Scalar, ...]:
        """Monomial coefficients in ascending powers, ``c[j]`` multiplies ``x**j``."""
        N = self.degree
        out = [None] * (N + 1)
        for k, e in enumerate(self.etilde):
            c = math.comb(N, k) * e
            out[N - k] = -c if k % 2 else c
        return tuple(out)

    def __call__(self, x):
        return eval_poly(self, x)

    def __repr__(self):
        kind = "exact" if self.exact else "float"
        tail = ", roots" if self.has_roots else ""
        return f"MonicPoly(N={self.degree}, {kind}{tail})"


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Uniform probability measure on the roots of a polynomial."""

    atoms: Tuple[Scalar, ...]

    @property
    def size(self) -> int:
        return len(self.atoms)

    @property
    def weight(self) -> float:
        return 1.0 / len(self.atoms)

    def mean(self) -> float:
        return math.fsum(float(a) for a in self.atoms) / len(self.atoms)


def _etilde_exact(roots: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    N = len(roots)
    e = [Fraction(1)] + [Fraction(0)] * N
    # incremental product expansion of prod(1 + r t)
    for i, r in enumerate(roots, start=1):
        for k in range(i, 0, -1):
            e[k] += r * e[k - 1]
    return tuple(e[k] / math.comb(N, k) for k in range(N + 1))


def _etilde_float(roots: Sequence[float]) -> Tuple[float, ...]:
    # Same expansion carried out directly on normalized values: after i roots,
    # et[k] = ((i - k) / i) * et[k] + (k / i) * r * et[k - 1]. For roots of one
    # sign every update is a convex combination, so no cancellation occurs.
    N = len(roots)
    et = [1.0] + [0.0] * N
    for i, r in enumerate(roots, start=1):
        for k in range(i, 0, -1):
            et[k] = ((i - k) * et[k] + k * r * et[k - 1]) / i
    return tuple(et)


def from_roots(roots: Sequence, exact: Optional[bool] = None) -> MonicPoly:
    """Build ``prod(x - root)`` and its normalized coefficients.

    With ``exact=None`` the backend is exact iff every root is an ``int`` or
    ``Fraction``.
    """
    roots = list(roots)
    if not roots:
        raise ValueError("cannot build a polynomial from an empty root list")
    if exact is None:
        exact = all(is_exact(r) for r in roots)
    roots = tuple(to_scalar(r, exact) for r in roots)
    etilde = _etilde_exact(roots) if exact else _etilde_float(roots)
    return MonicPoly(len(roots), etilde, roots)


def from_etilde(etilde: Sequence, exact: Optional[bool] = None) -> MonicPoly:
    etilde = list(etilde)
    if len(etilde) < 2:
        raise ValueError("need at least etilde[0] and etilde[1] (degree >= 1)")
    if exact is None:
        exact = all(is_exact(c) or isinstance(c, str) for c in etilde)
    etilde = tuple(to_scalar(c, exact) for c in etilde)
    if etilde[0] != 1:
        raise ValueError(f"leading normalized coefficient must be 1, got {etilde[0]}")
    return MonicPoly(len(etilde) - 1, etilde)


def from_coefficients(coeffs: Sequence) -> MonicPoly:
    """Inverse of :meth:`MonicPoly.coefficients` (ascending powers, monic)."""
    coeffs = list(coeffs)
    N = len(coeffs) - 1
    if N < 1:
        raise ValueError("degree must be at least 1")
    if coeffs[N] != 1:
        raise ValueError("polynomial is not monic")
    exact = all(is_exact(c) for c in coeffs)
    etilde = []
    for k in range(N + 1):
        c = coeffs[N - k]
        c = Fraction(c) if exact else float(c)
        e = (-c if k % 2 else c) / math.comb(N, k)
        etilde.append(e)
    etilde[0] = Fraction(1) if exact else 1.0
    return MonicPoly(N, tuple(etilde))


def eval_poly(p: MonicPoly, x):
    """Horner evaluation of the coefficient form."""
    acc = 0
    for c in reversed(p.coefficients()):
        acc = acc * x + c
    return acc


def eval_from_roots(p: MonicPoly, x):
    if p.roots is None:
        raise ValueError("polynomial has no stored roots")
    out = 1
    for r in p.roots:
        out *= x - r
    return out


def derivative(p: MonicPoly) -> Tuple[Scalar, ...]:
    """Ascending monomial coefficients of ``p'``."""
    c = p.coefficients()
    return tuple(j * c[j] for j in range(1, len(c)))


def shift(p: MonicPoly, a) -> MonicPoly:
    """Return ``q`` with ``q(x) = p(x - a)``; roots move by ``+a``."""
    if p.roots is not None:
        return from_roots([r + a for r in p.roots], exact=p.exact and is_exact(a))
    c = p.coefficients()
    N = p.degree
    # expand sum_j c_j (x - a)^j
    out = []
    for m in range(N + 1):
        acc = 0
        for j in range(m, N + 1):
            acc += c[j] * math.comb(j, m) * (-a) ** (j - m)
        out.append(acc)
    out[N] = 1
    return from_coefficients(out)


def empirical_distribution(p: MonicPoly) -> EmpiricalDistribution:
    if p.roots is None:
        raise ValueError("empirical distribution needs stored roots")
    return EmpiricalDistribution(tuple(sorted(p.roots)))


def power_of_linear(root, N: int) -> MonicPoly:
    """``(x - root)**N``; ``etilde[k] = root**k``."""
    return from_roots([root] * N)


def to_float(p: MonicPoly) -> MonicPoly:
    """Same polynomial in the float backend."""
    if p.roots is not None:
        return from_roots([float(r) for r in p.roots], exact=False)
    return MonicPoly(p.degree, tuple(float(c) for c in p.etilde))


def to_exact(p: MonicPoly) -> MonicPoly:
    if p.degree > EXACT_MAX_DEGREE:
        raise ValueError(f"exact backend is limited to N <= {EXACT_MAX_DEGREE}")
    if p.roots is not None:
        return from_roots([Fraction(r) for r in p.roots], exact=True)
    return MonicPoly(p.degree, tuple(Fraction(c) for c in p.etilde))


def check_negative_roots(p: MonicPoly) -> Tuple[float, ...]:
    """Return ``lambda_i = -root_i > 0`` as floats, or raise.

    Analytic quantities are sums over roots; coefficient-only polynomials are
    rejected rather than root-found.
    """
    if p.roots is None:
        raise ValueError("operation requires a polynomial with stored roots")
    lam = tuple(-float(r) for r in p.roots)
    if any(not (v > 0) for v in lam):
        raise ValueError("all roots must be strictly negative")
    return lam
