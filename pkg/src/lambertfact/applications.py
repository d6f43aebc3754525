"""Consequences of the Hadamard-product inverse: exotic sums, zeta series,
the omega(n) formula and three classical partition identities.

All of these reduce to the same shape. For a weight w (the divisor sum of
the first factor) and a sequence h,

    g(n) = sum_{k<=n} sum_{d|n} p(d-k) / w(d) * mu(n/d) * H(k),

where H(k) = h(k) + sum over pentagonal shifts j(3j+b)/2 <= k-1 of
(-1)^j h(k - j(3j+b)/2). This is :func:`hadamard_solve`.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import qseries as qs
from .arith import (
    divisors,
    mobius,
    omega_distinct,
    partition_p,
    pentagonal_shifts,
    sigma,
    totients,
    von_mangoldt,
)
from .errors import DivergenceError, DomainError, IdentityViolation
from .factorization import _c_entry, s_value
from .report import render

__all__ = [
    "EXOTIC_KINDS",
    "ZETA_VARIANTS",
    "ZetaReport",
    "dirichlet_sigma_check",
    "exotic_reference",
    "exotic_sum",
    "hadamard_solve",
    "omega_exact",
    "omega_inner_sum",
    "partition_identity_check",
    "plane_partitions",
    "restricted_partitions",
    "zeta_partial",
    "zeta_reference",
    "zeta_term",
]

EXOTIC_KINDS = ("power_s", "von_mangoldt", "jordan", "totient")
ZETA_VARIANTS = ("sigma_st", "sigma_st_shifted", "deriv_t1")


def _pentagonal_bracket(h, k):
    total = h(k)
    for sign, shift in pentagonal_shifts(k - 1):
        # shifts never exceed k - 1, so h is only evaluated at positive integers
        assert k - shift >= 1
        total += sign * h(k - shift)
    return total


def hadamard_solve(n, weight, h, zero=Fraction(0), bracket=None):
    """Evaluate the inverse-factorization double sum at n.

    ``bracket`` may hold precomputed H(k) values indexed by k.
    """
    total = zero
    for k in range(1, n + 1):
        Hk = bracket[k] if bracket is not None else _pentagonal_bracket(h, k)
        if not Hk:
            continue
        coef = zero
        for d in divisors(n):
            if d < k:
                continue
            mu = mobius(n // d)
            if mu:
                coef += (zero + mu * partition_p(d - k)) / weight(d)
        total += coef * Hk
    return total


def _kind(kind):
    k = kind.replace("-", "_")
    if k not in EXOTIC_KINDS:
        raise DomainError(f"unknown exotic sum {kind!r}; choose from {', '.join(EXOTIC_KINDS)}")
    return k


def _need_int(name, value, minimum=None):
    if not isinstance(value, int) or isinstance(value, bool):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")


def exotic_sum(kind, n, s=None, t=None, precision=128):
    """Evaluate one of the exotic sums at n.

    ``totient``      phi(n) from weight d and h(m) = m^2
    ``jordan``       J_t(n) from weight d^t and h(m) = m^(2t)
    ``power_s``      n^s from weight sigma_t(d) and h(m) = sigma_t(m) sigma_s(m)
    ``von_mangoldt`` Lambda(n) from weight d and h(m) = m log m, in mpmath reals
    """
    kind = _kind(kind)
    _need_int("n", n, 1)
    if kind == "totient":
        return hadamard_solve(n, lambda d: d, lambda m: m * m)
    if kind == "jordan":
        _need_int("t", t, 1)
        return hadamard_solve(n, lambda d: d**t, lambda m: m ** (2 * t))
    if kind == "power_s":
        _need_int("s", s)
        _need_int("t", t)
        return hadamard_solve(n, lambda d: sigma(d, t), lambda m: sigma(m, t) * sigma(m, s))
    with mpmath.workprec(precision):
        return hadamard_solve(
            n,
            lambda d: mpmath.mpf(d),
            lambda m: m * mpmath.log(m),
            zero=mpmath.mpf(0),
        )


def exotic_reference(kind, n, s=None, t=None, precision=128):
    """The classical function each exotic sum should reproduce."""
    kind = _kind(kind)
    if kind == "totient":
        return totients(n, 1)
    if kind == "jordan":
        return totients(n, t)
    if kind == "power_s":
        return Fraction(n) ** s
    return von_mangoldt(n, precision)


# -- zeta series ------------------------------------------------------------


def _is_exact(s):
    return isinstance(s, int) or (isinstance(s, Fraction) and s.denominator == 1)


def _zeta_parts(variant, s, t, precision):
    """(weight, h, zero) for a zeta series variant."""
    if variant not in ZETA_VARIANTS:
        raise DomainError(f"unknown zeta variant {variant!r}; choose from {', '.join(ZETA_VARIANTS)}")
    if s <= 1:
        raise DivergenceError(f"the zeta series needs s > 1, got s={s}")
    if variant != "deriv_t1":
        _need_int("t", t)
    if _is_exact(s):
        s = int(s)
        zero = Fraction(0)

        def sig(m, a):
            return sigma(m, a)

        def power(m, a):
            return Fraction(m) ** a
    else:
        with mpmath.workprec(precision):
            s = mpmath.mpf(s)
        zero = mpmath.mpf(0)

        def sig(m, a):
            return mpmath.fsum(mpmath.power(d, a) for d in divisors(m))

        def power(m, a):
            return mpmath.power(m, a)

    if variant == "sigma_st":
        return (lambda d: sig(d, t)), (lambda m: sig(m, t) * sig(m, s) / power(m, s)), zero
    if variant == "sigma_st_shifted":
        return (
            (lambda d: sig(d, t) / power(d, t)),
            (lambda m: sig(m, t) * sig(m, s) / power(m, s + t)),
            zero,
        )
    return (lambda d: d), (lambda m: sig(m, s) / power(m, s - 1)), zero


def zeta_term(variant, s, t, n, precision=128):
    """The n-th outer summand of a zeta series; equals n^(-s)."""
    weight, h, zero = _zeta_parts(variant, s, t, precision)
    _need_int("n", n, 1)
    with mpmath.workprec(precision):
        return hadamard_solve(n, weight, h, zero)


def zeta_reference(s, precision=128, cutoff=64, order=12):
    """zeta(s) for real s > 1 by Euler-Maclaurin summation.

    Returns ``(value, error_estimate)``; the estimate is the size of the
    first omitted Bernoulli correction term.
    """
    if s <= 1:
        raise DivergenceError(f"zeta(s) diverges for s={s}")
    with mpmath.workprec(precision + 16):
        s = mpmath.mpf(s)
        M = mpmath.mpf(cutoff)
        head = mpmath.fsum(mpmath.power(n, -s) for n in range(1, cutoff))
        total = head + mpmath.power(M, 1 - s) / (s - 1) + mpmath.power(M, -s) / 2
        rising = s
        for j in range(1, order + 2):
            term = (mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j)
                    * rising * mpmath.power(M, -s - 2 * j + 1))
            if j == order + 1:
                err = abs(term)
                break
            total += term
            rising *= (s + 2 * j - 1) * (s + 2 * j)
    return +total, +err


@dataclass
class ZetaReport:
    s: object
    t: int
    variant: str
    terms: list = field(default_factory=list)
    partial_sums: list = field(default_factory=list)
    reference: object = None
    reference_error: object = None
    abs_errors: list = field(default_factory=list)

    @property
    def N(self):
        return len(self.terms)

    def rows(self):
        for n, (term, ps, err) in enumerate(zip(self.terms, self.partial_sums, self.abs_errors), 1):
            yield n, term, ps, err

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "term", "partial_sum", "abs_error"])
        for n, term, ps, err in self.rows():
            w.writerow([n, render(term), render(ps), mpmath.nstr(err, 20)])
        return buf.getvalue()

    def to_dict(self):
        return {
            "variant": self.variant,
            "s": render(self.s),
            "t": self.t,
            "N": self.N,
            "reference": mpmath.nstr(self.reference, 30),
            "reference_error": mpmath.nstr(self.reference_error, 5),
            "rows": [
                {"n": n, "term": render(term), "partial_sum": render(ps),
                 "abs_error": mpmath.nstr(err, 20)}
                for n, term, ps, err in self.rows()
            ],
        }

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent)


def zeta_partial(variant, s, t, N, precision=128):
    """Partial sums of a zeta series for n = 1..N with errors against zeta(s)."""
    weight, h, zero = _zeta_parts(variant, s, t, precision)
    _need_int("N", N, 1)
    report = ZetaReport(s=s, t=t, variant=variant)
    with mpmath.workprec(precision):
        bracket = [None] + [_pentagonal_bracket(h, k) for k in range(1, N + 1)]
        ref, ref_err = zeta_reference(s, precision)
        report.reference, report.reference_error = ref, ref_err
        running = zero
        for n in range(1, N + 1):
            term = hadamard_solve(n, weight, h, zero, bracket)
            running = running + term
            report.terms.append(term)
            report.partial_sums.append(running)
            value = mpmath.mpf(running.numerator) / running.denominator if isinstance(
                running, Fraction) else running
            report.abs_errors.append(abs(ref - value))
    return report


def dirichlet_sigma_check(alpha, s, N, precision=128):
    """Compare sum_{n<=N} sigma_alpha(n)/n^s with zeta(s) zeta(s - alpha).

    Uses sigma_alpha(n) <= n^alpha (1 + log n) for alpha >= 1, which bounds
    the tail by N^(alpha+1-s) ((1 + log N)/(s-alpha-1) + 1/(s-alpha-1)^2).
    """
    _need_int("alpha", alpha, 1)
    if s - alpha <= 1:
        raise DivergenceError(f"need s - alpha > 1, got s={s}, alpha={alpha}")
    with mpmath.workprec(precision):
        partial = mpmath.fsum(
            mpmath.mpf(sum(d**alpha for d in divisors(n))) / mpmath.power(n, s)
            for n in range(1, N + 1)
        )
        z1, e1 = zeta_reference(s, precision)
        z2, e2 = zeta_reference(s - alpha, precision)
        reference = z1 * z2
        c = mpmath.mpf(s - alpha - 1)
        tail = mpmath.power(N, -c) * ((1 + mpmath.log(N)) / c + 1 / c**2)
        slack = e1 * z2 + e2 * z1
        gap = reference - partial
    return {
        "alpha": alpha,
        "s": s,
        "N": N,
        "partial": partial,
        "reference": reference,
        "tail_bound": tail,
        "passed": bool(-slack <= gap <= tail + slack),
    }


# -- omega(n) -----------------------------------------------------------------


def _c_entry_literal(k, j):
    # the same double sum with the mu(k/d) factor left out
    return sum(
        sum(partition_p(d - j * i) for i in range(1, d // j + 1)) for d in divisors(k)
    )


def omega_inner_sum(n, literal=False):
    """sum_{k<=n} sum_{j<=k} C_{k,j} s_{n,k} |mu(j)|, which equals 2^omega(n).

    ``literal=True`` drops the mu(k/d) factor from C_{k,j}; that version is
    kept only to show it does not produce powers of two.
    """
    _need_int("n", n, 1)
    c = _c_entry_literal if literal else _c_entry
    total = 0
    for k in range(1, n + 1):
        s = s_value(n, k)
        if s:
            total += s * sum(c(k, j) for j in range(1, k + 1) if mobius(j))
    return total


def omega_exact(n):
    """omega(n) as the base-2 logarithm of :func:`omega_inner_sum`."""
    value = omega_inner_sum(n)
    if value < 1 or value & (value - 1):
        raise IdentityViolation(f"inner sum at n={n} is {value}, not a power of two")
    return value.bit_length() - 1


# -- classical partition identities ------------------------------------------


def restricted_partitions(k, N):
    """p_k(0..N): partitions into at most k parts, from prod_{i<=k} 1/(1-q^i)."""
    prod = qs.QSeries.one(N)
    for i in range(1, k + 1):
        prod = prod * (qs.QSeries.one(N) - qs.QSeries.monomial(i, N))
    return [int(c) for c in qs.series_reciprocal(prod)]


def plane_partitions(N):
    """pp(0..N) from prod_{k>=1} (1 - q^k)^(-k)."""
    prod = qs.QSeries.one(N)
    for k in range(1, N + 1):
        factor = qs.QSeries.one(N) - qs.QSeries.monomial(k, N)
        for _ in range(k):
            prod = prod * factor
    return [int(c) for c in qs.series_reciprocal(prod)]


def partition_identity_check(which, n, k=None):
    """Evaluate both sides of a classical partition identity at n.

    ``p_sigma1``      n p(n) = sum_{j=0}^{n-1} p(j) sigma_1(n - j); the result
                      also carries the variant with sigma_1(n) in place of
                      sigma_1(n - j) under ``"printed"``
    ``pk_restricted`` n p_k(n) = sum_{t=1}^n p_k(n - t) sum_{j|t, j<=k} j
    ``pp_sigma2``     n pp(n) = sum_{j=1}^n pp(n - j) sigma_2(j)
    """
    _need_int("n", n, 1)
    out = {"identity": which, "n": n}
    if which == "p_sigma1":
        lhs = n * partition_p(n)
        rhs = sum(partition_p(j) * int(sigma(n - j, 1)) for j in range(n))
        printed = sum(partition_p(j) for j in range(n)) * int(sigma(n, 1))
        out["printed"] = {"lhs": lhs, "rhs": printed, "passed": lhs == printed}
    elif which == "pk_restricted":
        _need_int("k", k, 1)
        pk = restricted_partitions(k, n)
        lhs = n * pk[n]
        rhs = sum(
            pk[n - t] * sum(j for j in divisors(t) if j <= k) for t in range(1, n + 1)
        )
        out["k"] = k
    elif which == "pp_sigma2":
        pp = plane_partitions(n)
        lhs = n * pp[n]
        rhs = sum(pp[n - j] * int(sigma(j, 2)) for j in range(1, n + 1))
    else:
        raise DomainError(f"unknown identity {which!r}")
    out.update(lhs=lhs, rhs=rhs, passed=lhs == rhs)
    return out
