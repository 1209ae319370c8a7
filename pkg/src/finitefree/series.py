"""Truncated power series ``a_0 + a_1 s + ... + a_M s**M`` (mod ``s**(M+1)``)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: Tuple

    def __init__(self, coeffs: Sequence):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("series needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order <= self.order:
            return TruncatedSeries(self.coeffs[: order + 1])
        return TruncatedSeries(self.coeffs + (0,) * (order - self.order))

    def _common(self, other):
        M = min(self.order, other.order)
        return self.coeffs[: M + 1], other.coeffs[: M + 1], M

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        a, b, _ = self._common(other)
        return TruncatedSeries(x + y for x, y in zip(a, b))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        a, b, _ = self._common(other)
        return TruncatedSeries(x - y for x, y in zip(a, b))

    def __neg__(self):
        return TruncatedSeries(-x for x in self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(other * x for x in self.coeffs)
        a, b, M = self._common(other)
        out = []
        for n in range(M + 1):
            acc = 0
            for i in range(n + 1):
                acc += a[i] * b[n - i]
            out.append(acc)
        return TruncatedSeries(out)

    __rmul__ = __mul__

    def __truediv__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        a, b, M = self._common(other)
        if b[0] == 0:
            raise ZeroDivisionError("series division needs a nonzero constant term")
        q = []
        for n in range(M + 1):
            acc = a[n]
            for i in range(1, n + 1):
                acc -= b[i] * q[n - i]
            q.append(acc / b[0])
        return TruncatedSeries(q)

    def derivative(self) -> "TruncatedSeries":
        """Derivative; the order drops by one (minimum order 0)."""
        if self.order == 0:
            return TruncatedSeries((0 * self.coeffs[0],))
        return TruncatedSeries(n * self.coeffs[n] for n in range(1, self.order + 1))

    def scale_argument(self, c) -> "TruncatedSeries":
        """Series of ``f(c s)``."""
        out, pw = [], 1
        for a in self.coeffs:
            out.append(a * pw)
            pw = pw * c
        return TruncatedSeries(out)

    def log(self) -> "TruncatedSeries":
        """Formal logarithm of a series with ``a_0 = 1``.

        Uses ``n b_n = n a_n - sum_{j=1}^{n-1} j b_j a_{n-j}``.
        """
        a = self.coeffs
        if a[0] != 1:
            raise ValueError("formal log needs constant term 1")
        b = [0 * a[0]]
        for n in range(1, len(a)):
            acc = n * a[n]
            for j in range(1, n):
                acc -= j * b[j] * a[n - j]
            b.append(acc / n)
        return TruncatedSeries(b)

    def exp(self) -> "TruncatedSeries":
        """Formal exponential of a series with ``a_0 = 0``."""
        a = self.coeffs
        if a[0] != 0:
            raise ValueError("formal exp needs constant term 0")
        e = [1 + 0 * a[0]]
        for n in range(1, len(a)):
            acc = 0
            for j in range(1, n + 1):
                acc += j * a[j] * e[n - j]
            e.append(acc / n)
        return TruncatedSeries(e)

    def __call__(self, s):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * s + a
        return acc

    def equals_mod(self, other: "TruncatedSeries", order: int) -> bool:
        """True iff the two series agree modulo ``s**(order+1)``."""
        a = self.truncate(order).coeffs
        b = other.truncate(order).coeffs
        return all(x == y for x, y in zip(a, b))
