"""Exact Lambert series factorizations checked against truncated q-series."""

__version__ = "0.1.0"

from .arith import (
    ArithmeticTable,
    as_table,
    divisors,
    mobius,
    partition_p,
    resolve_function,
    sigma,
    totients,
)
from .errors import (
    DivergenceError,
    DomainError,
    IdentityViolation,
    LambertError,
    NonInvertibleError,
    SingularMatrixError,
)
from .qseries import QSeries, lambert_gf, pochhammer_qq, q_derivative
from .factorization import (
    FactorMatrix,
    c_matrix,
    conv_forward,
    conv_inverse,
    deriv_inverse_t1,
    deriv_matrix,
    factored_series,
    hadamard_forward,
    hadamard_inverse,
    invert_lower_triangular,
    mixed_deriv_forward,
    mixed_deriv_inverse,
    reconstruct_b,
    related_fact_matrix,
    s_base,
    stilde,
)
from .derivatives import DerivParams, a_t, deriv_term_series, theorem34_check
from .applications import exotic_sum, omega_exact, zeta_partial, zeta_term
from .report import VerificationReport
from .suites import run_suite
