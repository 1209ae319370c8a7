"""Limiting measures on the negative half-line and their quantile discretizations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .polycore import MonicPoly, from_roots


class MeasureSpecError(ValueError):
    pass


def _bisect(f, lo, hi, tol=1e-12, max_iter=200):
    """Root of an increasing ``f`` on ``[lo, hi]``."""
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


class ReferenceMeasure:
    """Base class; subclasses supply closed forms.

    ``G`` and ``R`` are only evaluated on the positive real axis, where ``G``
    is strictly decreasing from ``alpha = G(0)`` to 0.
    """

    kind = "abstract"

    def support(self) -> Tuple[float, float]:
        raise NotImplementedError

    def quantile(self, u: float) -> float:
        raise NotImplementedError

    def G(self, x: float) -> float:
        raise NotImplementedError

    def R(self, s: float) -> float:
        raise NotImplementedError

    @property
    def alpha(self) -> float:
        return self.G(0.0)

    def mean(self) -> float:
        raise NotImplementedError

    def _check_s(self, s):
        if not 0 < s < self.alpha:
            raise ValueError(f"s={s!r} must lie in (0, alpha) with alpha = G_mu(0) = {self.alpha!r}")


@dataclass(frozen=True)
class PointMass(ReferenceMeasure):
    """Dirac mass at ``location < 0``."""

    location: float
    kind = "point_mass"

    def __post_init__(self):
        if not self.location < 0:
            raise MeasureSpecError("point mass must sit on the negative axis")

    def support(self):
        return (self.location, self.location)

    def quantile(self, u):
        return self.location

    def G(self, x):
        return 1.0 / (x - self.location)

    def R(self, s):
        self._check_s(s)
        return self.location

    def mean(self):
        return self.location


@dataclass(frozen=True)
class Uniform(ReferenceMeasure):
    """Uniform law on ``[a, b]`` with ``a < b < 0``."""

    a: float
    b: float
    kind = "uniform"

    def __post_init__(self):
        if not self.a < self.b < 0:
            raise MeasureSpecError("uniform needs a < b < 0")

    def support(self):
        return (self.a, self.b)

    def quantile(self, u):
        return self.a + u * (self.b - self.a)

    def G(self, x):
        a, b = float(self.a), float(self.b)
        return math.log((x - a) / (x - b)) / (b - a)

    def R(self, s):
        self._check_s(s)
        a, b = float(self.a), float(self.b)
        # (z - a)/(z - b) = E with E = exp(s (b - a))
        em1 = math.expm1(s * (b - a))
        z = b + (b - a) / em1
        return z - 1.0 / s

    def mean(self):
        return 0.5 * (self.a + self.b)


@dataclass(frozen=True)
class Semicircle(ReferenceMeasure):
    """Wigner semicircle centred at ``center`` with radius ``radius``."""

    center: float
    radius: float
    kind = "semicircle"

    def __post_init__(self):
        if not self.radius > 0:
            raise MeasureSpecError("semicircle radius must be positive")
        if not self.center + self.radius < 0:
            raise MeasureSpecError("semicircle support must be negative (c + r < 0)")

    def support(self):
        return (self.center - self.radius, self.center + self.radius)

    def cdf(self, t):
        u = (t - self.center) / self.radius
        if u <= -1:
            return 0.0
        if u >= 1:
            return 1.0
        return 0.5 + (u * math.sqrt(1 - u * u) + math.asin(u)) / math.pi

    def quantile(self, u):
        if u <= 0:
            return self.center - self.radius
        if u >= 1:
            return self.center + self.radius
        lo, hi = self.support()
        return _bisect(lambda t: self.cdf(t) - u, lo, hi, tol=1e-12)

    def G(self, x):
        w = x - self.center
        r2 = self.radius ** 2
        # branch with G(x) ~ 1/x; written to avoid cancellation
        return 2.0 / (w * (1.0 + math.sqrt(1.0 - r2 / (w * w)))) if w > 0 else math.nan

    def R(self, s):
        self._check_s(s)
        return self.center + self.radius ** 2 * s / 4.0

    def mean(self):
        return self.center


@dataclass(frozen=True)
class FiniteAtomic(ReferenceMeasure):
    """Finitely many atoms on the negative axis with normalized weights."""

    atoms: Tuple[float, ...]
    weights: Tuple[float, ...]
    kind = "finite_atomic"

    def __post_init__(self):
        if len(self.atoms) != len(self.weights) or not self.atoms:
            raise MeasureSpecError("atoms and weights must have equal nonzero length")
        if any(not a < 0 for a in self.atoms):
            raise MeasureSpecError("atoms must be negative")
        if any(w <= 0 for w in self.weights):
            raise MeasureSpecError("weights must be positive")
        if abs(math.fsum(float(w) for w in self.weights) - 1.0) > 1e-12:
            raise MeasureSpecError("weights must sum to 1")
        order = sorted(range(len(self.atoms)), key=lambda i: self.atoms[i])
        object.__setattr__(self, "atoms", tuple(self.atoms[i] for i in order))
        object.__setattr__(self, "weights", tuple(self.weights[i] for i in order))

    def support(self):
        return (self.atoms[0], self.atoms[-1])

    def quantile(self, u):
        acc = 0.0
        for a, w in zip(self.atoms, self.weights):
            acc += float(w)
            if u <= acc:
                return a
        return self.atoms[-1]

    def G(self, x):
        return math.fsum(float(w) / (x - float(a)) for a, w in zip(self.atoms, self.weights))

    def R(self, s):
        self._check_s(s)
        lam_min = -float(self.atoms[-1])
        lam_max = -float(self.atoms[0])
        lo = max(0.0, 1.0 / s - lam_max)
        hi = 1.0 / s - lam_min
        x = _bisect(lambda x: s - self.G(x), lo, hi, tol=1e-15 * max(hi, 1.0))
        # polish with Newton; G' in closed form
        for _ in range(5):
            dG = -math.fsum(float(w) / (x - float(a)) ** 2 for a, w in zip(self.atoms, self.weights))
            x -= (self.G(x) - s) / dG
        return x - 1.0 / s

    def mean(self):
        return math.fsum(float(a) * float(w) for a, w in zip(self.atoms, self.weights))

    def multiplicities(self, N: int) -> Tuple[int, ...]:
        """Largest-remainder apportionment of ``N`` roots to the atoms."""
        raw = [Fraction(w).limit_denominator(10**12) * N for w in self.weights]
        base = [int(math.floor(r)) for r in raw]
        rest = N - sum(base)
        order = sorted(range(len(raw)), key=lambda i: (-(raw[i] - base[i]), i))
        for i in order[:rest]:
            base[i] += 1
        return tuple(base)


def G_mu(mu: ReferenceMeasure, x: float) -> float:
    if x < 0:
        raise ValueError("x must be nonnegative")
    return mu.G(x)


def R_mu(mu: ReferenceMeasure, s: float) -> float:
    return mu.R(s)


def quantile_poly(mu: ReferenceMeasure, N: int, exact: bool = False) -> MonicPoly:
    """Polynomial with roots at the midpoint quantiles ``F^{-1}((i - 1/2)/N)``.

    Finite atomic measures use largest-remainder multiplicities instead. With
    ``exact=True`` point, uniform and atomic measures keep rational roots.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if isinstance(mu, FiniteAtomic):
        roots = []
        for a, m in zip(mu.atoms, mu.multiplicities(N)):
            roots.extend([a] * m)
    elif exact and isinstance(mu, (PointMass, Uniform)):
        roots = [mu.quantile(Fraction(2 * i - 1, 2 * N)) for i in range(1, N + 1)]
    else:
        roots = [mu.quantile((i - 0.5) / N) for i in range(1, N + 1)]
    if exact:
        return from_roots([Fraction(r) for r in roots], exact=True)
    return from_roots([float(r) for r in roots], exact=False)


def parse_measure(spec: str) -> ReferenceMeasure:
    """Parse ``point:-1.5``, ``uniform:-2:-1``, ``semicircle:-3:1`` or ``atomic:-1@0.5,-2@0.5``.

    Parameters are read as exact rationals so that exact quantiles stay exact.
    """
    kind, _, rest = spec.strip().partition(":")
    kind = kind.lower()
    try:
        if kind == "point":
            return PointMass(Fraction(rest))
        if kind == "uniform":
            a, b = rest.split(":")
            return Uniform(Fraction(a), Fraction(b))
        if kind == "semicircle":
            c, r = rest.split(":")
            return Semicircle(float(Fraction(c)), float(Fraction(r)))
        if kind == "atomic":
            atoms, weights = [], []
            for item in rest.split(","):
                a, w = item.split("@")
                atoms.append(Fraction(a))
                weights.append(Fraction(w))
            return FiniteAtomic(tuple(atoms), tuple(weights))
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, MeasureSpecError):
            raise
        raise MeasureSpecError(f"cannot parse measure spec {spec!r}: {exc}") from exc
    raise MeasureSpecError(f"unknown measure kind {kind!r} in {spec!r}")
