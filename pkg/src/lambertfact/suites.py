"""Verification suites: each builds a VerificationReport by comparing a
closed form or factorization with the q-series oracle."""

from fractions import Fraction

from . import qseries as qs
from .applications import exotic_reference, exotic_sum, omega_inner_sum, zeta_term
from .arith import (
    ArithmeticTable,
    as_table,
    divisors,
    omega_distinct,
    partition_p,
    resolve_function,
)
from .derivatives import (
    DerivParams,
    a_t_lambert_coeffs,
    deriv_term_series,
    modified_coeff,
    modified_series,
    remark_b_matrix,
    theorem34_check,
)
from .errors import DomainError
from .factorization import (
    FactorMatrix,
    c_matrix,
    conv_forward,
    conv_forward_oracle,
    conv_inverse,
    deriv_inverse_t1,
    deriv_matrix,
    factored_series,
    hadamard_forward,
    hadamard_forward_oracle,
    hadamard_inverse,
    invert_lower_triangular,
    mixed_deriv_forward,
    mixed_deriv_inverse,
    mobius_matrix,
    partition_matrix,
    reconstruct_b,
    related_fact_matrix,
    s_base,
    s_base_combinatorial,
    stilde,
    tdiv_matrix,
)
from .report import VerificationReport

__all__ = ["SUITES", "run_suite"]


def _entries(A, B):
    for n in range(A.start, A.stop):
        for k in range(A.start, n + 1):
            yield (n, k), A[n, k], B[n, k]


def _coeffs(lhs, rhs, lo, hi):
    return ((n, lhs[n], rhs[n]) for n in range(lo, hi + 1))


def _identity_product(report, name, forward, inverse):
    prod = forward @ inverse
    ident = FactorMatrix.identity(prod.dim, prod.start)
    report.add(name, (prod.start, prod.stop - 1), _entries(prod, ident))


def _fn(spec):
    return resolve_function(spec) if isinstance(spec, str) else spec


# -- suites ------------------------------------------------------------------


def base_suite(N, **_):
    report = VerificationReport("base", {"N": N})
    S = s_base(N)
    top = min(N, 25)
    report.add(
        "s_base_vs_distinct_partitions", (1, top),
        (((n, k), S[n, k], s_base_combinatorial(n, k))
         for n in range(1, top + 1) for k in range(1, n + 1)),
    )
    bad = next(
        ((n, k) for n in range(1, N + 1) for k in range(1, n + 1)
         if S[n, k].denominator != 1 or abs(S[n, k]) > partition_p(n)),
        None,
    )
    report.add_result(
        "s_base_integral_and_bounded", (1, N), bad is None,
        None if bad is None else {"n": list(bad), "lhs": str(S[bad]), "rhs": str(partition_p(bad[0]))},
    )
    report.add("hadamard_forward_delta1_is_s_base", (1, N),
               _entries(hadamard_forward(resolve_function("delta1"), N), S))
    return report


def hadamard_suite(N, f="id", g="phi", **_):
    f, g = _fn(f), _fn(g)
    report = VerificationReport("hadamard", {"N": N})
    F = hadamard_forward(f, N)
    report.add("hadamard_forward_vs_oracle", (1, N), _entries(F, hadamard_forward_oracle(f, N)))
    inv = hadamard_inverse(f, N, verify=False)
    _identity_product(report, "hadamard_forward_times_inverse", F, inv)
    report.add("hadamard_inverse_vs_substitution", (1, N), _entries(inv, invert_lower_triangular(F)))
    lhs = qs.lambert_gf(qs.hadamard_coeffs(f, g, N), N)
    report.add("hadamard_factorization", (1, N), _coeffs(lhs, factored_series(F, g), 1, N))
    # g_n = sum_k s^{-1}_{n,k} [q^k] (q;q) * (Hadamard Lambert series)
    E = qs.series_mul(qs.pochhammer_qq(N), lhs)
    gt = as_table(g, N)
    report.add(
        "hadamard_inverse_form", (1, N),
        ((n, gt[n], sum((inv[n, k] * E[k] for k in range(1, n + 1)), Fraction(0)))
         for n in range(1, N + 1)),
    )
    return report


def convolution_suite(N, f="mu", g="phi", **_):
    f, g = _fn(f), _fn(g)
    report = VerificationReport("convolution", {"N": N})
    F = conv_forward(g, N, verify=False)
    report.add("conv_forward_vs_oracle", (1, N), _entries(F, conv_forward_oracle(g, N)))
    inv = conv_inverse(g, N, verify=False)
    _identity_product(report, "conv_forward_times_inverse", F, inv)
    report.add("conv_inverse_vs_substitution", (1, N), _entries(inv, invert_lower_triangular(F)))

    FL = qs.lambert_gf(f, N + 1)
    GL = qs.lambert_gf(g, N + 1)
    lhs = qs.series_mul(FL, GL).shift(-1)
    report.add("convolution_factorization", (1, N), _coeffs(lhs, factored_series(F, f), 1, N))

    X = qs.series_mul(qs.pochhammer_qq(N + 1), qs.series_mul(FL, GL))
    ft = as_table(f, N)
    report.add(
        "convolution_inverse_form", (1, N),
        ((n, ft[n], sum((inv[n, k] * X[k + 1] for k in range(1, n + 1)), Fraction(0)))
         for n in range(1, N + 1)),
    )

    fg = ArithmeticTable(
        sum(ft[d] * as_table(g, N)[n // d] for d in divisors(n)) for n in range(1, N + 1)
    )
    report.add("stilde_factorization", (1, N),
               _coeffs(qs.lambert_gf(fg, N), factored_series(stilde(g, N), f), 1, N))
    return report


def _derivative_expansions(report, s_max, i_max, order):
    for variant in ("i", "ii", "stirling"):
        def triples(variant=variant):
            for s in range(s_max + 1):
                for i in range(1, i_max + 1):
                    direct = deriv_term_series(i, s, "direct", order)
                    got = deriv_term_series(i, s, variant, order)
                    for n in range(order + 1):
                        yield (s, i, n), got[n], direct[n]
        report.add(f"derivative_expansion_{variant}_vs_direct", (0, order), triples())


def _modified_coefficients(report, N, a, m_max=3, k_max=3, t_max=2):
    def triples():
        for m in range(1, m_max + 1):
            for k in range(k_max + 1):
                for t in range(1, t_max + 1):
                    ser = modified_series(a, m, k, t, N)
                    for n in range(1, N + 1):
                        yield (m, k, t, n), modified_coeff(a, m, k, t, n), ser[n]
    report.add("modified_coefficients", (1, N), triples())


def _related_factorizations(report, N, a):
    def b(j, k):
        return (j * 7 + k * 3) % 5 - 2
    B = FactorMatrix.from_entries(b, N)
    lhs = qs.lambert_gf(B.apply([a[k] for k in range(1, N + 1)]), N)
    report.add("related_factorization", (1, N),
               _coeffs(lhs, factored_series(related_fact_matrix(B, N), a), 1, N))
    T = tdiv_matrix(N)
    report.add("related_tdiv_is_stilde_one", (1, N),
               _entries(related_fact_matrix(T, N), stilde(resolve_function("one"), N)))


def derivatives_suite(N, t=1, a="id", form="printed", **_):
    table = as_table(_fn(a), N)
    report = VerificationReport("derivatives", {"N": N, "t": t, "form": form})
    M = deriv_matrix(t, N)
    trimmed = [table[m] if m >= t else 0 for m in range(1, N + 1)]
    lhs = qs.q_derivative(qs.lambert_gf(trimmed, N), t)
    report.add("derivative_factorization", (t, N), _coeffs(lhs, factored_series(M, table), t, N))
    inv = deriv_inverse_t1(N, verify=False) if t == 1 else invert_lower_triangular(M)
    _identity_product(report, "derivative_forward_times_inverse", M, inv)
    report.merge(theorem34_check(DerivParams(t, N, table), form))
    params = DerivParams(t, N, table)
    report.add("remark_b_linearity", (1, N),
               _coeffs([None] + list(remark_b_matrix(t, N).apply([table[k] for k in range(1, N + 1)])),
                       [None] + list(a_t_lambert_coeffs(params, "printed").values()), 1, N))
    return report


def mixed_suite(N, j=2, **_):
    report = VerificationReport("mixed", {"N": N, "j": j})
    _identity_product(report, f"mixed_j{j}_forward_times_inverse",
                      mixed_deriv_forward(j, N), mixed_deriv_inverse(j, N, verify=False))
    return report


def lemmas_suite(N, **_):
    report = VerificationReport("lemmas", {"N": N})
    a = as_table(resolve_function("phi"), N)
    _modified_coefficients(report, N, a)
    _derivative_expansions(report, 4, 6, N)
    _related_factorizations(report, N, a)
    return report


def reconstruct_suite(N, **_):
    report = VerificationReport("reconstruct", {"N": N})
    for name in ("delta1", "mu", "phi", "sigma1"):
        a = as_table(resolve_function(name), N)
        report.add(f"reconstruct_b_{name}", (1, N),
                   _coeffs([None] + list(reconstruct_b(a, N).values()),
                           [None] + list(a.divisor_sum().values()), 1, N))
    derived = mobius_matrix(N) @ partition_matrix(N) @ tdiv_matrix(N)
    report.add("c_matrix_vs_derivation", (1, N), _entries(c_matrix(N), derived))
    report.add("tdiv_inverse_is_mobius", (1, N),
               _entries(invert_lower_triangular(tdiv_matrix(N)), mobius_matrix(N)))
    return report


def omega_suite(N, **_):
    report = VerificationReport("omega", {"N": N})
    report.add("omega_inner_sum", (1, N),
               ((n, omega_inner_sum(n), 2 ** omega_distinct(n)) for n in range(1, N + 1)))
    return report


def exotic_suite(N, **_):
    report = VerificationReport("exotic", {"N": N})
    for kind, s, t in (("totient", None, None), ("jordan", None, 2), ("jordan", None, 3),
                       ("power_s", 2, 1)):
        label = kind if t is None or kind != "jordan" else f"{kind}_{t}"
        report.add(f"exotic_{label}", (1, N),
                   ((n, exotic_sum(kind, n, s, t), exotic_reference(kind, n, s, t))
                    for n in range(1, N + 1)))
    return report


def zeta_suite(N, **_):
    report = VerificationReport("zeta", {"N": N})
    for variant in ("sigma_st", "sigma_st_shifted", "deriv_t1"):
        report.add(
            f"zeta_{variant}_terms", (1, N),
            (((s, t, n), zeta_term(variant, s, t, n), Fraction(1, n**s))
             for s in (2, 3, 4) for t in (1, 2) for n in range(1, N + 1)),
        )
    return report


def all_suite(N, t=1, f="id", g="phi", form="printed", **_):
    report = VerificationReport("all", {"N": N, "t": t})
    parts = [
        base_suite(N),
        hadamard_suite(N, f=f, g=g),
        convolution_suite(N, g=g),
        derivatives_suite(N, t=t, form=form),
        mixed_suite(N, j=2),
        mixed_suite(N, j=3),
        lemmas_suite(N),
        reconstruct_suite(N),
        omega_suite(N),
        exotic_suite(N),
        zeta_suite(N),
    ]
    for part in parts:
        report.merge(part)
    return report


SUITES = {
    "base": base_suite,
    "hadamard": hadamard_suite,
    "convolution": convolution_suite,
    "derivatives": derivatives_suite,
    "mixed": mixed_suite,
    "lemmas": lemmas_suite,
    "reconstruct": reconstruct_suite,
    "omega": omega_suite,
    "exotic": exotic_suite,
    "zeta": zeta_suite,
    "all": all_suite,
}


def run_suite(name, N, **params):
    """Run a named suite; unknown parameters are ignored by suites that don't use them."""
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    return SUITES[name](N, **{k: v for k, v in params.items() if v is not None})
