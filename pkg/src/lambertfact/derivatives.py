"""Higher-order derivatives of Lambert series.

The closed forms below are transcribed as printed: the binomial-convolution
coefficient lemma, the two Stirling-number expansions of
q^s D^s[q^i/(1 - q^i)], the quadruple sum A_t(n), and the factorization
identities built on A_t. Each one can be compared with a direct q-series
computation, and :func:`theorem34_check` reports which identities hold.

The two Stirling expansions and the A_t sum only agree with direct
differentiation for small orders (see ``deriv_term_series`` and the tests).
``variant="stirling"`` and :func:`a_t_oracle` give the correct values.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from . import qseries as qs
from .arith import (
    ArithmeticTable,
    as_table,
    binomial,
    divisors,
    falling_factorial,
    mobius,
    pentagonal_shifts,
    stirling1_unsigned,
    stirling2,
)
from .errors import DomainError
from .factorization import FactorMatrix, invert_lower_triangular, stilde
from .report import VerificationReport, render

__all__ = [
    "DerivParams",
    "a_t",
    "a_t_lambert_coeffs",
    "a_t_oracle",
    "deriv_term_series",
    "modified_coeff",
    "modified_series",
    "remark_b",
    "remark_b_matrix",
    "theorem34_check",
]


@dataclass(frozen=True)
class DerivParams:
    t: int
    N: int
    a: ArithmeticTable

    def __post_init__(self):
        if self.t < 1:
            raise DomainError(f"derivative order must be >= 1, got {self.t}")
        if self.N < self.t:
            raise DomainError(f"need N >= t, got N={self.N}, t={self.t}")
        object.__setattr__(self, "a", as_table(self.a, self.N))


def modified_coeff(a, m, k, t, n):
    """sum over d | n with t <= d <= n // m of C(n/d - m + k, k) a_d."""
    if m < 1 or t < 1 or n < 1 or k < 0:
        raise DomainError(f"bad arguments m={m}, k={k}, t={t}, n={n}")
    total = 0
    for d in divisors(n):
        if t <= d <= n // m:
            total += binomial(n // d - m + k, k) * a[d]
    return total


def modified_series(a, m, k, t, N):
    """sum_{i>=t} a_i q^{mi} / (1 - q^i)^{k+1} expanded as a q-series."""
    a = as_table(a, N)
    total = qs.QSeries.zero(N)
    for i in range(t, N + 1):
        if m * i > N or not a[i]:
            continue
        # 1/(1-x)^{k+1} = sum_r C(r+k, k) x^r with x = q^i
        c = [0] * (N + 1)
        r = 0
        while m * i + r * i <= N:
            c[m * i + r * i] = math.comb(r + k, k) * a[i]
            r += 1
        total = total + qs.QSeries(c)
    return total


def _inverse_power(i, e, N):
    """1 / (1 - q^i)^e to order N."""
    c = [0] * (N + 1)
    r = 0
    while r * i <= N:
        c[r * i] = math.comb(r + e - 1, e - 1)
        r += 1
    return qs.QSeries(c)


def deriv_term_series(i, s, variant, N):
    """q^s D^s [q^i / (1 - q^i)] to order N by one of four routes.

    ``"direct"``   term-by-term differentiation of q^i/(1 - q^i);
    ``"i"``        sum_{m,k} c(s,m) S(m,k) (-1)^(s-k) k! i^m / (1 - q^i)^(k+1);
    ``"ii"``       the same with the extra sum over r of C(s-k, r) (-1)^(s-k-r)
                   times q^((r+1) i);
    ``"stirling"`` sum_{m,k} (-1)^(s-m) c(s,m) S(m,k) k! i^m q^(ik) / (1 - q^i)^(k+1),
                   which follows from q^s D^s = sum_m s(s,m) (qD)^m.

    ``c`` and ``S`` are the unsigned Stirling numbers of the first kind and
    the Stirling numbers of the second kind.
    """
    if i < 1 or s < 0:
        raise DomainError(f"need i >= 1 and s >= 0, got i={i}, s={s}")
    term = qs.lambert_term(i, N)
    if variant == "direct":
        return term if s == 0 else qs.q_derivative(term, s)
    if variant == "stirling" and s == 0:
        return term

    total = qs.QSeries.zero(N)
    for m in range(s + 1):
        c1 = stirling1_unsigned(s, m)
        if not c1:
            continue
        for k in range(m + 1):
            c2 = stirling2(m, k)
            if not c2:
                continue
            base = c1 * c2 * math.factorial(k) * i**m
            inv = _inverse_power(i, k + 1, N)
            if variant == "i":
                total = total + inv * ((-1) ** (s - k) * base)
            elif variant == "ii":
                for r in range(s - k + 1):
                    coef = binomial(s - k, r) * (-1) ** (s - k - r) * base
                    total = total + (inv * coef).shift((r + 1) * i)
            elif variant == "stirling":
                total = total + (inv * ((-1) ** (s - m) * base)).shift(k * i)
            else:
                raise DomainError(f"unknown variant {variant!r}")
    return total


def a_t(params, n, form="printed"):
    """A_t(n) as the Stirling/binomial quadruple sum.

    ``form="printed"`` sums over 0 <= k <= m <= t, 0 <= r <= t and d | n with
    t <= d <= n // (r+1) of
    c(t,m) S(m,k) C(t-k, r) C(n/d - 1 - r + k, k) (-1)^(t-k-r) k! d^m a_d.
    This matches the q-series coefficient only for t = 1.

    ``form="stirling"`` uses the corrected expansion instead:
    sum over d | n, d >= t of a_d sum_{m,k} (-1)^(t-m) c(t,m) S(m,k) k! d^m C(n/d, k).
    """
    t, a = params.t, params.a
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if form == "stirling":
        return _a_t_stirling(t, a, n)
    if form != "printed":
        raise DomainError(f"unknown form {form!r}")
    total = 0
    divs = divisors(n)
    for m in range(t + 1):
        c1 = stirling1_unsigned(t, m)
        if not c1:
            continue
        for k in range(m + 1):
            c2 = stirling2(m, k)
            if not c2:
                continue
            fk = math.factorial(k)
            for r in range(t + 1):
                b1 = binomial(t - k, r)
                if not b1:
                    continue
                sign = (-1) ** (t - k - r)
                for d in divs:
                    if t <= d <= n // (r + 1):
                        assert n % d == 0
                        total += (c1 * c2 * b1 * binomial(n // d - 1 - r + k, k)
                                  * sign * fk * d**m * a[d])
    return total


def _a_t_stirling(t, a, n):
    total = 0
    for d in divisors(n):
        if d < t:
            continue
        inner = 0
        for m in range(1, t + 1):
            c1 = stirling1_unsigned(t, m)
            for k in range(1, m + 1):
                inner += ((-1) ** (t - m) * c1 * stirling2(m, k) * math.factorial(k)
                          * d**m * binomial(n // d, k))
        total += inner * a[d]
    return total


def a_t_oracle(params):
    """[q^n] q^t D^t [sum_{m>=t} a_m q^m / (1 - q^m)] for n = 0..N."""
    t, N, a = params.t, params.N, params.a
    trimmed = [a[m] if m >= t else 0 for m in range(1, N + 1)]
    return qs.q_derivative(qs.lambert_gf(trimmed, N), t)


def a_t_lambert_coeffs(params, form="printed"):
    """(A_t * mu)(n) for n <= N, so that sum_{d|n} of it gives back A_t(n)."""
    values = ArithmeticTable(a_t(params, n, form) for n in range(1, params.N + 1))
    return values.mobius_inverse()


def remark_b(n, i, t):
    """b_{n,i}: the coefficient of a_i in (A_t * mu)(n)."""
    if i < 1 or n < 1:
        raise DomainError(f"need n, i >= 1, got n={n}, i={i}")
    if i > n:
        return 0
    total = 0
    for d in divisors(n):
        if d % i:
            continue
        mu = mobius(n // d)
        if not mu:
            continue
        for m in range(t + 1):
            c1 = stirling1_unsigned(t, m)
            if not c1:
                continue
            for k in range(m + 1):
                c2 = stirling2(m, k)
                if not c2:
                    continue
                for r in range(t + 1):
                    if not t <= i <= d // (r + 1):
                        continue
                    total += (c1 * c2 * binomial(t - k, r)
                              * binomial(d // i - 1 - r + k, k)
                              * (-1) ** (t - k - r) * math.factorial(k)
                              * i**m * mu)
    return total


def remark_b_matrix(t, N):
    return FactorMatrix.from_entries(lambda n, i: remark_b(n, i, t), N)


def _pentagonal_transform(values, k):
    """[q^k] of (q;q)_inf * sum_{m>=1} values[m] q^m."""
    total = values[k]
    for sign, shift in pentagonal_shifts(k - 1):
        total += sign * values[k - shift]
    return total


def theorem34_check(params, form="printed"):
    """Evaluate the three factorization identities for A_t and report each.

    1. A_t(n) = [q^n] (1/(q;q)_inf) sum_n sum_k s~_{n,k}(mu) A_t(k) q^n
    2. A_t(n) = sum_k s~^{-1}_{n,k}(mu) [A_t(k) + pentagonal corrections]
    3. n!/(n-t)! sum_{d|n} a_d
         = sum_{i<t} sum_{k <= n/i} s~^{-1}_{n,ik}(mu) (ik)!/(ik-t)! a_i + A_t(n)

    A fourth entry compares the A_t sum with the direct q-series coefficient.
    Here s~^{-1}(mu) is the exact inverse of :func:`stilde` with g = mu, and
    ``form`` selects how A_t is evaluated (see :func:`a_t`).
    """
    t, N, a = params.t, params.N, params.a
    report = VerificationReport(
        "derivatives", {"t": t, "N": N, "form": form, "a": [render(x) for x in a]}
    )
    A = [0] + [a_t(params, n, form) for n in range(1, N + 1)]
    rng = (1, N)

    St = stilde(mobius, N)
    Sinv = invert_lower_triangular(St)
    P = qs.series_reciprocal(qs.pochhammer_qq(N))
    factored = [St.apply(A[1:])[n - 1] for n in range(1, N + 1)]
    series = qs.series_mul(P, qs.QSeries([0] + factored))
    report.add("a_t_factorization", rng, ((n, A[n], series[n]) for n in range(1, N + 1)))

    transformed = [None] + [_pentagonal_transform(A, k) for k in range(1, N + 1)]
    report.add(
        "a_t_inverse_form",
        rng,
        ((n, A[n], sum((Sinv[n, k] * transformed[k] for k in range(1, n + 1)), Fraction(0)))
         for n in range(1, N + 1)),
    )

    def full_rhs(n):
        extra = Fraction(0)
        for i in range(1, t):
            for k in range(1, n // i + 1):
                extra += Sinv[n, i * k] * falling_factorial(i * k, t) * a[i]
        return extra + A[n]

    report.add(
        "full_derivative_formula",
        rng,
        ((n, falling_factorial(n, t) * sum(a[d] for d in divisors(n)), full_rhs(n))
         for n in range(1, N + 1)),
    )

    oracle = a_t_oracle(params)
    report.add("a_t_vs_oracle", rng, ((n, A[n], oracle[n]) for n in range(1, N + 1)))
    return report
