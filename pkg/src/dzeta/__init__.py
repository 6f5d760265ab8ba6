"""Numerical library for the Euler double zeta function
zeta2(s1, s2) = sum_{1 <= m < n} m^{-s1} n^{-s2}: analytic continuation,
truncated-polynomial approximations, mean-value constants, and verification
of the mean-square asymptotics along vertical and diagonal lines.
"""

from .core import (
    AccuracyError,
    ApproxValue,
    DEFAULT_POLICY,
    DomainError,
    EMParams,
    EULER_GAMMA,
    PreconditionError,
    QuadPolicy,
    SingularityError,
    TruncationPolicy,
)
from .bernoulli import bernoulli, periodic_bernoulli, pochhammer
from .zeta import zeta, zeta_em, zeta_hl, zeta_kt, zeta_prime, zeta_prime_hl
from .double_zeta import (
    EvalResult,
    dzeta_approx_diag,
    dzeta_approx_t1,
    dzeta_approx_t2,
    dzeta_brute,
    dzeta_u_split,
    dzeta_v_split,
    evaluate,
    is_regular,
    resolve_split,
)
from .series import (
    DivisorTable,
    SeriesResult,
    region_check,
    series_z21,
    series_z22,
    series_z2box,
)
from .mean_square import (
    CaseShape,
    DirichletPolynomial,
    MeanSquareReport,
    TheoremCase,
    UnsupportedCaseError,
    classify_case,
    dirichlet_mean_bound_check,
    dirichlet_mean_exact,
    fit_and_verify,
    integrate_mean_square,
    predicted_main,
    resolve_case,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
