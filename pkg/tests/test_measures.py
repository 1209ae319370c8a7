import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from finitefree.analytic import cauchy
from finitefree.measures import (
    FiniteAtomic,
    MeasureSpecError,
    PointMass,
    Semicircle,
    Uniform,
    G_mu,
    R_mu,
    parse_measure,
    quantile_poly,
)

MEASURES = [
    PointMass(-1.5),
    Uniform(-2.0, -1.0),
    Semicircle(-3.0, 1.0),
    FiniteAtomic((-1.0, -2.0, -4.0), (0.5, 0.3, 0.2)),
]


def semicircle_density(c, r):
    return lambda t: 2 / (math.pi * r * r) * math.sqrt(max(r * r - (t - c) ** 2, 0.0))


def test_quantile_poly_point_mass():
    p = quantile_poly(PointMass(Fraction(-3, 2)), 6, exact=True)
    assert p.etilde == tuple(Fraction(-3, 2) ** k for k in range(7))


def test_quantile_poly_uniform():
    assert quantile_poly(Uniform(-2, -1), 2).roots == (-1.75, -1.25)
    assert quantile_poly(Uniform(Fraction(-2), Fraction(-1)), 2, exact=True).roots == (Fraction(-7, 4), Fraction(-5, 4))


def test_quantile_poly_semicircle():
    mu = Semicircle(-3.0, 1.0)
    roots = quantile_poly(mu, 4).roots
    dens = semicircle_density(-3.0, 1.0)
    for i, r in enumerate(roots, start=1):
        mass, _ = integrate.quad(dens, -4.0, r, epsabs=1e-14)
        assert mass == pytest.approx((i - 0.5) / 4, abs=1e-10)
    # symmetric about the centre
    assert roots[0] + roots[3] == pytest.approx(-6.0, abs=1e-11)
    assert roots[1] + roots[2] == pytest.approx(-6.0, abs=1e-11)


def test_quantile_poly_atomic_largest_remainder():
    mu = FiniteAtomic((-1.0, -2.0, -4.0), (0.5, 0.3, 0.2))
    assert mu.multiplicities(7) == (1, 2, 4)  # sorted atoms (-4, -2, -1): 1.4, 2.1, 3.5
    assert sorted(quantile_poly(mu, 10).roots) == [-4.0] * 2 + [-2.0] * 3 + [-1.0] * 5


def test_uniform_closed_forms():
    mu = Uniform(-2.0, -1.0)
    assert G_mu(mu, 0.0) == pytest.approx(math.log(2), rel=1e-15)
    e = math.exp(0.25)
    assert R_mu(mu, 0.25) == pytest.approx((2 - e) / (e - 1) - 4, rel=1e-13)
    assert R_mu(mu, 0.25) == pytest.approx(-1.47918833581, rel=1e-10)


def test_point_mass_closed_forms():
    mu = PointMass(-1.5)
    assert R_mu(mu, 0.3) == -1.5
    assert G_mu(mu, 2.0) == pytest.approx(1 / 3.5)


def test_semicircle_branch_and_mean():
    mu = Semicircle(-3.0, 1.0)
    assert 1e6 * mu.G(1e6) == pytest.approx(1.0, rel=1e-5)
    assert R_mu(mu, 1e-9) == pytest.approx(-3.0, abs=1e-8)
    assert mu.alpha == pytest.approx(2 * (3 - math.sqrt(8)), rel=1e-13)


@pytest.mark.parametrize("mu", MEASURES, ids=lambda m: m.kind)
def test_G_against_quadrature(mu):
    for x in (0.0, 0.5, 3.0):
        if isinstance(mu, Uniform):
            val, _ = integrate.quad(lambda t: 1 / (x - t), -2, -1, epsabs=1e-14)
        elif isinstance(mu, Semicircle):
            d = semicircle_density(-3.0, 1.0)
            val, _ = integrate.quad(lambda t: d(t) / (x - t), -4, -2, epsabs=1e-14)
        else:
            atoms = [mu.location] if isinstance(mu, PointMass) else mu.atoms
            weights = [1.0] if isinstance(mu, PointMass) else mu.weights
            val = sum(w / (x - a) for a, w in zip(atoms, weights))
        assert mu.G(x) == pytest.approx(val, rel=1e-10)


@pytest.mark.parametrize("mu", MEASURES, ids=lambda m: m.kind)
def test_R_and_G_inverse(mu):
    for s in np.linspace(0.01, 0.9 * mu.alpha, 15):
        assert mu.G(mu.R(s) + 1 / s) == pytest.approx(s, rel=1e-10)


@pytest.mark.parametrize("mu", MEASURES, ids=lambda m: m.kind)
def test_R_domain(mu):
    with pytest.raises(ValueError, match="alpha"):
        mu.R(mu.alpha * 1.01)


@pytest.mark.parametrize("mu", MEASURES[1:], ids=lambda m: m.kind)
def test_empirical_cauchy_converges(mu):
    errs = [abs(cauchy(quantile_poly(mu, N), 0.7) - mu.G(0.7)) for N in (10, 40, 160)]
    assert errs[0] >= errs[1] >= errs[2]


def test_semicircle_boxplus_target():
    a, b = Semicircle(-3.0, 1.0), Semicircle(-2.0, 0.5)
    c = Semicircle(-5.0, math.sqrt(1.25))
    for s in (0.01, 0.05, 0.1):
        assert a.R(s) + b.R(s) == pytest.approx(c.R(s), rel=1e-14)


def test_parse_measure():
    assert parse_measure("point:-1.5") == PointMass(Fraction(-3, 2))
    assert parse_measure("uniform:-2:-1") == Uniform(Fraction(-2), Fraction(-1))
    assert parse_measure("semicircle:-3:1") == Semicircle(-3.0, 1.0)
    mu = parse_measure("atomic:-1@0.5,-2@0.5")
    assert mu.atoms == (-2, -1) and mu.weights == (Fraction(1, 2), Fraction(1, 2))


@pytest.mark.parametrize("spec", ["point:1", "uniform:-1:-2", "semicircle:-1:2", "atomic:-1@0.5", "gauss:0:1", "uniform:x:y"])
def test_parse_measure_rejects(spec):
    with pytest.raises(MeasureSpecError):
        parse_measure(spec)
