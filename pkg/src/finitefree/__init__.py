"""Finite free additive convolution, finite R-transforms and their large-N limits."""

from .analytic import (
    DomainError,
    TiltContext,
    cauchy,
    certify_laplace_integral,
    certify_psi_prime,
    certify_R_sandwich,
    certify_all,
    certify_lemma31,
    certify_lemma33,
    certify_prop34,
    L_N,
    legendre_L_infty,
    log_potential,
    psi,
    saddle,
    T_kernel,
    tilted_R,
    voiculescu_R_empirical,
)
from .convolution import SuperadditivityReport, boxplus, superadditivity_report
from .measures import FiniteAtomic, PointMass, Semicircle, Uniform, parse_measure, quantile_poly
from .oracles import BoundCertificate, QuadratureResult, enumerate_partitions, quad_laplace
from .polycore import MonicPoly, derivative, eval_poly, from_etilde, from_roots, shift, to_exact, to_float
from .series import TruncatedSeries
from .transforms import (
    CumulantVector,
    PoleError,
    apply_fff_operator,
    fff,
    fff_linearization_check,
    finite_cumulants_logseries,
    finite_cumulants_mobius,
    finite_R,
    laplace_fff_identity,
)

__version__ = "0.1.0"
