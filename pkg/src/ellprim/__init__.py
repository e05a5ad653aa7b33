"""Primitive prime divisors of elliptic-curve group orders over extension fields.

For Frobenius parameters (q, a) the group orders N_n = q^n + 1 - t_n form a
divisibility sequence.  This package computes them exactly, factors them,
classifies their primitive primes and checks the explicit inequalities
that bound the largest prime factor from below.
"""

from .bounds import (
    BoundReport,
    IteratedLog,
    arith_inequalities,
    case_split_report,
    main_theorem_bound,
    phin_log_check,
    pprime_bound_report,
    stewart_quad_bound,
    stewart_rat_bound,
    thresholds,
)
from .errors import (
    CongruenceViolation,
    DomainError,
    EllPrimError,
    EnumerationTooLarge,
    FactorizationExceeded,
    IncompleteFactorization,
    InvalidParams,
    MismatchError,
    NotUnitary,
    PreconditionViolation,
)
from .factor import Budget, FactoredInteger, factorize, is_probable_prime, valuation
from .primitive import (
    check_congruence,
    classify_prime,
    crt_class,
    gamma_valuation,
    primitive_primes,
    rank_of_apparition,
)
from .quadratic import FrobeniusParams, QuadInt, gamma_class
from .sequence import cyclo_norm, cyclotomic_poly, group_order, order_value, trace
from .sunits import SUnitInstance, count_bounded_compositions, theta_bound, theta_exact

__all__ = [
    "BoundReport",
    "Budget",
    "CongruenceViolation",
    "DomainError",
    "EllPrimError",
    "EnumerationTooLarge",
    "FactoredInteger",
    "FactorizationExceeded",
    "FrobeniusParams",
    "IncompleteFactorization",
    "InvalidParams",
    "IteratedLog",
    "MismatchError",
    "NotUnitary",
    "PreconditionViolation",
    "QuadInt",
    "SUnitInstance",
    "arith_inequalities",
    "case_split_report",
    "check_congruence",
    "classify_prime",
    "count_bounded_compositions",
    "crt_class",
    "cyclo_norm",
    "cyclotomic_poly",
    "factorize",
    "gamma_class",
    "gamma_valuation",
    "group_order",
    "is_probable_prime",
    "main_theorem_bound",
    "order_value",
    "phin_log_check",
    "pprime_bound_report",
    "primitive_primes",
    "rank_of_apparition",
    "stewart_quad_bound",
    "stewart_rat_bound",
    "theta_bound",
    "theta_exact",
    "thresholds",
    "trace",
    "valuation",
]
__version__ = "0.1.0"
