"""Convergence experiments: finite vs. limiting R-transforms as N grows."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import List, Sequence

import numpy as np

from .analytic import DomainError, certify_R_sandwich, saddle, voiculescu_R_empirical
from .convolution import boxplus
from .measures import ReferenceMeasure, quantile_poly
from .polycore import EXACT_MAX_DEGREE, to_exact
from .transforms import finite_R

# keeps 1/(x_s sigma^2) away from its blow-up at s = alpha
S_MARGIN = 0.9


@dataclass(frozen=True)
class ExperimentRow:
    N: int
    s: float
    r_finite: float
    r_limit: float
    delta: float
    lower: float
    upper: float
    runtime_ms: float = math.nan

    @property
    def inside(self) -> bool:
        return self.lower <= self.delta <= self.upper


@dataclass(frozen=True)
class BoxplusRow:
    N: int
    max_abs_dev: float
    s_at_max: float
    min_superadditivity_gap: float


def fit_slope(ns: Sequence[int], values: Sequence[float]) -> float:
    """Least-squares slope of ``log|value|`` vs ``log N`` over the larger half of ``ns``."""
    pairs = sorted(zip(ns, values))
    keep = pairs[len(pairs) // 2:] if len(pairs) >= 4 else pairs
    x = np.log([n for n, _ in keep])
    y = np.log([abs(v) for _, v in keep])
    return float(np.polyfit(x, y, 1)[0])


def run_converge(mu: ReferenceMeasure, n_list: Sequence[int], s: float,
                 exact: bool = False) -> List[ExperimentRow]:
    """Finite R-transform of quantile polynomials vs. their empirical R-transform.

    ``delta = R^(N)_{p_N}(s) - R_{[p_N]}(s)`` with the two-sided envelope from
    the saddle-point comparison attached to each row.
    """
    alpha = mu.alpha
    if not 0 < float(s) <= S_MARGIN * alpha:
        raise DomainError(f"s={float(s)!r} must lie in (0, {S_MARGIN} * alpha] with alpha = G_mu(0) = {alpha!r}")
    rows = []
    for N in sorted(n_list):
        t0 = time.perf_counter()
        p = quantile_poly(mu, N)
        ctx = saddle(p, s)
        if exact:
            if N > EXACT_MAX_DEGREE:
                raise ValueError(f"--exact is limited to N <= {EXACT_MAX_DEGREE}")
            r_fin = float(finite_R(to_exact(p), Fraction(s)))
        else:
            r_fin = float(finite_R(p, s))
        r_lim = voiculescu_R_empirical(ctx)
        cert = certify_R_sandwich(ctx)
        rows.append(ExperimentRow(N, float(s), r_fin, r_lim, r_fin - r_lim, cert.lower, cert.upper,
                                  1000 * (time.perf_counter() - t0)))
    return rows


def check_boxplus_grid(mu: ReferenceMeasure, nu: ReferenceMeasure, s_grid: Sequence[float]):
    b = max(-mu.support()[0], -nu.support()[0])
    limit = 1.0 / (2.0 * float(b))
    bad = [s for s in s_grid if not 0 < s < limit]
    if bad:
        raise DomainError(f"s-grid values {bad} outside (0, 1/(2b)) = (0, {limit!r})")


def run_boxplus_converge(mu: ReferenceMeasure, nu: ReferenceMeasure, n_list: Sequence[int],
                         s_grid: Sequence[float]) -> List[BoxplusRow]:
    """``max_s |R^(N)_{p_N boxplus q_N}(s) - (R_mu(s) + R_nu(s))|`` per ``N``."""
    check_boxplus_grid(mu, nu, s_grid)
    target = [mu.R(s) + nu.R(s) for s in s_grid]
    rows = []
    for N in sorted(n_list):
        p, q = quantile_poly(mu, N), quantile_poly(nu, N)
        r = boxplus(p, q)
        devs, gaps = [], []
        for s, t in zip(s_grid, target):
            rr = finite_R(r, s)
            devs.append(abs(rr - float(t)))
            gaps.append(rr - finite_R(p, s) - finite_R(q, s))
        i = int(np.argmax(devs))
        rows.append(BoxplusRow(N, devs[i], float(s_grid[i]), min(gaps)))
    return rows


def row_header(cls, timing: bool = True) -> List[str]:
    names = [f.name for f in fields(cls)]
    if not timing and "runtime_ms" in names:
        names.remove("runtime_ms")
    return names
