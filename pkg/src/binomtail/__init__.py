"""Exact partial binomial sums, their continued fraction, certified bounds
and the maximizer of omega**-r * s_m(r)."""

__version__ = "0.1.0"

from .binomial_core import binomial, g_value, partial_sum, reflect_identity_check
from .bounds_cert import (
    DomainError,
    Enclosure,
    Method,
    Target,
    coarse_q_bounds,
    coarse_t_bounds,
    geometric_bounds_s,
    head_enclosure_q,
    head_enclosure_s,
    k_refined_lower,
    max_value_bounds,
)
from .cf_engine import (
    CFExpansion,
    ZeroDenominator,
    cf_coefficients,
    expand,
    head,
    kettenbruch_K,
    q_exact,
    r_sequence,
    tails,
    verify_factorizations,
)
from .gauss_approx import NormalApproxReport, approx_s, berry_esseen_report, phi
from .maximizer import (
    CheckResult,
    Ordering,
    UnimodalProfile,
    Weight,
    WeightKind,
    brute_force_r0,
    check_formula_theorem,
    check_gerhard_hypothesis,
    check_omega2,
    check_root3_theorem,
    compare_weight,
    find_r0,
    r_prime,
    t_ratio,
    verify_unimodal_chain,
)
from .surd import QuadraticNumber
