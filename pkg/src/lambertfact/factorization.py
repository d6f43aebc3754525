"""Factorization matrices and their exact inverses.

Every builder returns a :class:`FactorMatrix`, a lower-triangular block of
exact rationals whose rows and columns run over ``start .. start + dim - 1``.
Forward matrices built from a closed form can be checked against the same
matrix read off the q-series side (the ``*_oracle`` builders), and closed-form
inverses are checked against forward substitution when ``verify=True``.
"""

import csv
import io
import json
import logging
from fractions import Fraction
from functools import lru_cache

from . import qseries as qs
from .arith import (
    ArithmeticTable,
    as_table,
    divisors,
    falling_factorial,
    mobius,
    partition_p,
    pentagonal_shifts,
)
from .errors import DomainError, IdentityViolation, NonInvertibleError, SingularMatrixError

log = logging.getLogger(__name__)

__all__ = [
    "FactorMatrix",
    "c_matrix",
    "conv_forward",
    "conv_forward_oracle",
    "conv_inverse",
    "deriv_inverse_t1",
    "deriv_matrix",
    "factored_series",
    "hadamard_forward",
    "hadamard_forward_oracle",
    "hadamard_inverse",
    "invert_lower_triangular",
    "mixed_deriv_forward",
    "mixed_deriv_inverse",
    "mobius_matrix",
    "partition_matrix",
    "reconstruct_b",
    "related_fact_matrix",
    "s_base",
    "s_base_combinatorial",
    "s_value",
    "stilde",
    "tdiv_matrix",
]


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


class FactorMatrix:
    """Lower-triangular exact matrix indexed from ``start``.

    ``m[n, k]`` uses the absolute indices of the underlying sequences, so a
    derivative matrix with ``start=2`` has its first entry at ``m[2, 2]``.
    """

    __slots__ = ("start", "_rows")

    def __init__(self, rows, start=1):
        if start < 1:
            raise DomainError(f"start index must be >= 1, got {start}")
        stored = []
        for i, row in enumerate(rows):
            row = list(row)
            if any(row[i + 1:]):
                raise DomainError(f"row {start + i} has entries above the diagonal")
            stored.append(tuple(_frac(x) for x in row[: i + 1]))
        self.start = start
        self._rows = tuple(stored)

    @classmethod
    def from_entries(cls, entry, dim, start=1):
        """Build from a callable ``entry(n, k)`` over the lower triangle."""
        rows = [
            [entry(n, k) for k in range(start, n + 1)]
            for n in range(start, start + dim)
        ]
        return cls(rows, start)

    @classmethod
    def identity(cls, dim, start=1):
        return cls.from_entries(lambda n, k: int(n == k), dim, start)

    @property
    def dim(self):
        return len(self._rows)

    @property
    def stop(self):
        """One past the last valid index."""
        return self.start + len(self._rows)

    def __getitem__(self, nk):
        n, k = nk
        if not (self.start <= n < self.stop and self.start <= k < self.stop):
            raise IndexError(f"({n}, {k}) outside the block {self.start}..{self.stop - 1}")
        if k > n:
            return Fraction(0)
        return self._rows[n - self.start][k - self.start]

    def row(self, n):
        """Row n padded with zeros to full width."""
        r = self._rows[n - self.start]
        return r + (Fraction(0),) * (self.dim - len(r))

    def dense(self):
        return [list(self.row(n)) for n in range(self.start, self.stop)]

    def diagonal(self):
        return [r[-1] for r in self._rows]

    def __eq__(self, other):
        if isinstance(other, FactorMatrix):
            return self.start == other.start and self._rows == other._rows
        return NotImplemented

    def __hash__(self):
        return hash((self.start, self._rows))

    def __repr__(self):
        return f"FactorMatrix(start={self.start}, dim={self.dim})"

    def block(self, start, dim):
        if start < self.start or start + dim > self.stop:
            raise IndexError("requested block lies outside the matrix")
        return FactorMatrix.from_entries(lambda n, k: self[n, k], dim, start)

    def __matmul__(self, other):
        if not isinstance(other, FactorMatrix):
            return NotImplemented
        if self.start != other.start or self.dim != other.dim:
            raise DomainError("matrix product needs matching start and dim")
        s = self.start
        a, b = self._rows, other._rows
        rows = []
        for i in range(self.dim):
            ai = a[i]
            row = []
            for j in range(i + 1):
                acc = Fraction(0)
                for m in range(j, i + 1):
                    x = ai[m]
                    if x:
                        y = b[m][j]
                        if y:
                            acc += x * y
                row.append(acc)
            rows.append(row)
        return FactorMatrix(rows, s)

    def apply(self, vector):
        """Matrix times a vector indexed like the columns (start..stop-1)."""
        v = [vector[k] for k in range(self.start, self.stop)] if isinstance(
            vector, (ArithmeticTable, dict)
        ) else list(vector)
        if len(v) != self.dim:
            raise DomainError(f"vector has length {len(v)}, expected {self.dim}")
        return [sum((x * y for x, y in zip(r, v) if x), Fraction(0)) for r in self._rows]

    def is_identity(self):
        return all(
            r[-1] == 1 and not any(r[:-1]) for r in self._rows
        )

    def inverse(self):
        return invert_lower_triangular(self)

    def max_bits(self):
        """Largest numerator/denominator bit length among the entries."""
        return max(
            (max(x.numerator.bit_length(), x.denominator.bit_length())
             for r in self._rows for x in r),
            default=0,
        )

    # -- serialization -------------------------------------------------

    def to_dict(self, kind=None):
        out = {
            "start": self.start,
            "dim": self.dim,
            "entries": [[f"{x.numerator}/{x.denominator}" for x in r] for r in self.dense()],
        }
        if kind is not None:
            out = {"kind": kind, **out}
        return out

    def to_json(self, kind=None, indent=None):
        return json.dumps(self.to_dict(kind), indent=indent)

    @classmethod
    def from_dict(cls, data):
        rows = [[Fraction(x) for x in r] for r in data["entries"]]
        if len(rows) != data["dim"]:
            raise DomainError("dim does not match the number of rows")
        return cls(rows, data["start"])

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n"] + list(range(self.start, self.stop)))
        for n in range(self.start, self.stop):
            w.writerow([n] + [str(x) for x in self.row(n)])
        return buf.getvalue()

    def to_pretty(self):
        cells = [[str(x) for x in self.row(n)] for n in range(self.start, self.stop)]
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join(" ".join(c.rjust(width) for c in r) for r in cells) + "\n"


def invert_lower_triangular(M):
    """Exact inverse by forward substitution."""
    rows = M._rows
    dim = M.dim
    inv = []
    for i in range(dim):
        d = rows[i][i]
        if d == 0:
            raise SingularMatrixError(M.start + i)
        inv.append([Fraction(0)] * (i + 1))
        inv[i][i] = 1 / d
    for i in range(dim):
        ri = rows[i]
        for j in range(i - 1, -1, -1):
            acc = Fraction(0)
            for m in range(j, i):
                x = ri[m]
                if x:
                    y = inv[m][j]
                    if y:
                        acc += x * y
            inv[i][j] = -acc * inv[i][i]
    return FactorMatrix(inv, M.start)


def _check_inverse(forward, inverse, label):
    prod = forward @ inverse
    if not prod.is_identity():
        for n in range(prod.start, prod.stop):
            for k in range(prod.start, n + 1):
                if prod[n, k] != (n == k):
                    raise IdentityViolation(
                        f"{label}: forward @ inverse differs from I at ({n}, {k})"
                    )
    return inverse


def factored_series(M, a, N=None):
    """(1/(q;q)_inf) * sum_n (sum_k M[n,k] a_k) q^n, to order N.

    This is the right-hand side shared by every factorization theorem; rows
    below ``M.start`` contribute nothing.
    """
    N = M.stop - 1 if N is None else N
    a = as_table(a, M.stop - 1)
    c = [Fraction(0)] * (N + 1)
    for n in range(M.start, min(N, M.stop - 1) + 1):
        c[n] = sum((M[n, k] * a[k] for k in range(M.start, n + 1)), Fraction(0))
    return qs.series_mul(qs.series_reciprocal(qs.pochhammer_qq(N)), qs.QSeries(c))


# -- the base matrix s_{n,k} ----------------------------------------------


@lru_cache(maxsize=None)
def _pochhammer_ints(N):
    return tuple(int(c) for c in qs.pochhammer_qq(N).coeffs)


def _pochhammer_coeff(m):
    # coefficients are stable under truncation, so any large enough table works
    size = 64
    while size < m:
        size *= 2
    return _pochhammer_ints(size)[m]


@lru_cache(maxsize=None)
def s_value(n, k):
    """s_{n,k} = [q^n] (q; q)_inf q^k / (1 - q^k) as an integer."""
    if k < 1 or n < 1:
        raise DomainError(f"s_value needs n, k >= 1, got ({n}, {k})")
    return sum(_pochhammer_coeff(n - m) for m in range(k, n + 1, k))


def s_base(N):
    """The N x N matrix of s_{n,k}, read off the product of two q-series."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    E = qs.pochhammer_qq(N)
    rows = []
    for n in range(1, N + 1):
        rows.append([0] * n)
    for k in range(1, N + 1):
        col = qs.series_mul(E, qs.lambert_term(k, N))
        for n in range(k, N + 1):
            rows[n - 1][k - 1] = col[n]
    return FactorMatrix(rows)


def _distinct_partitions(n, max_part=None):
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for part in range(min(n, max_part), 0, -1):
        for rest in _distinct_partitions(n - part, part - 1):
            yield (part,) + rest


def s_base_combinatorial(n, k):
    """s_o(n, k) - s_e(n, k) by listing every partition of n into distinct parts.

    A part k contributes +1 when the partition has an odd number of parts and
    -1 otherwise. Exponential cost, so n is capped at 40.
    """
    if not 1 <= k <= n <= 40:
        raise DomainError(f"enumeration oracle only covers 1 <= k <= n <= 40, got ({n}, {k})")
    total = 0
    for part in _distinct_partitions(n):
        if k in part:
            total += 1 if len(part) % 2 else -1
    return total


def tdiv_matrix(N):
    """The 0/1 divisibility matrix T_Div(n, k)."""
    return FactorMatrix.from_entries(lambda n, k: int(n % k == 0), N)


def mobius_matrix(N):
    """Inverse of :func:`tdiv_matrix`: entry mu(n/k) when k | n."""
    return FactorMatrix.from_entries(
        lambda n, k: mobius(n // k) if n % k == 0 else 0, N
    )


def partition_matrix(N):
    """Toeplitz matrix p(n - k)."""
    return FactorMatrix.from_entries(lambda n, k: partition_p(n - k), N)


# -- Hadamard products ----------------------------------------------------


def hadamard_forward(f, N):
    """s_{n,k}(f) from the pentagonal-number closed form.

    s_{n,k}(f) = T(n, k) f~(n) + sum over pentagonal shifts p <= n - k of
    (-1)^j T(n - p, k) f~(n - p), where f~ is the divisor sum of f.
    """
    ft = as_table(f, N).divisor_sum()

    def entry(n, k):
        total = ft[n] if n % k == 0 else 0
        for sign, shift in pentagonal_shifts(n - k):
            m = n - shift
            if m % k == 0:
                total += sign * ft[m]
        return total

    return FactorMatrix.from_entries(entry, N)


def hadamard_forward_oracle(f, N):
    """s_{n,k}(f) = [q^n] (q; q)_inf * sum_m T(m, k) f~(m) q^m, by series product."""
    ft = as_table(f, N).divisor_sum()
    E = qs.pochhammer_qq(N)
    rows = [[0] * n for n in range(1, N + 1)]
    for k in range(1, N + 1):
        col = qs.series_mul(
            E, qs.QSeries([0] + [ft[m] if m % k == 0 else 0 for m in range(1, N + 1)])
        )
        for n in range(k, N + 1):
            rows[n - 1][k - 1] = col[n]
    return FactorMatrix(rows)


def _divisor_weight_inverse(weight, N):
    """sum_{d|n} p(d - k) / weight(d) * mu(n/d) for 1 <= k <= n <= N."""
    w = {}
    for d in range(1, N + 1):
        wd = weight(d)
        if wd == 0:
            raise NonInvertibleError(f"weight vanishes at d={d}")
        w[d] = _frac(wd)

    def entry(n, k):
        total = Fraction(0)
        for d in divisors(n):
            if d >= k:
                mu = mobius(n // d)
                if mu:
                    total += mu * partition_p(d - k) / w[d]
        return total

    return FactorMatrix.from_entries(entry, N)


def hadamard_inverse(f, N, verify=True):
    """Closed-form inverse s^{(-1)}_{n,k}(f) = sum_{d|n} p(d-k)/f~(d) mu(n/d)."""
    ft = as_table(f, N).divisor_sum()
    for d in range(1, N + 1):
        if ft[d] == 0:
            raise NonInvertibleError(
                f"f~({d})=0: the Hadamard inverse sequence is undefined"
            )
    inv = _divisor_weight_inverse(lambda d: ft[d], N)
    if verify:
        _check_inverse(hadamard_forward(ft.mobius_inverse(), N), inv, "hadamard")
    return inv


# -- convolutions ----------------------------------------------------------


def stilde(g, N):
    """s~_{n,k}(g) = sum_{j >= 1, kj <= n} s_{n,kj} g(j)."""
    g = as_table(g, N)
    return FactorMatrix.from_entries(
        lambda n, k: sum(s_value(n, k * j) * g[j] for j in range(1, n // k + 1)), N
    )


def conv_forward(g, N, empty_divisor_sum=0, verify=True):
    """s_{n,k}(g) = sum_{j=1}^{n+1} s_{j,k} g~(n + 1 - j).

    The j = n + 1 term carries g~(0), a divisor sum over the divisors of 0.
    It must be 0 for the matrix to factor (1/q) F_L G_L; other values are
    accepted so that the boundary convention can be compared. With
    ``verify`` the result is compared with :func:`conv_forward_oracle` and,
    on disagreement, the oracle matrix is returned and the mismatch logged.
    """
    gt = as_table(g, N).divisor_sum()

    def gtilde(m):
        return empty_divisor_sum if m == 0 else gt[m]

    def entry(n, k):
        total = 0
        for j in range(k, n + 2):
            s = s_value(j, k)
            if s:
                total += s * gtilde(n + 1 - j)
        return total

    M = FactorMatrix.from_entries(entry, N)
    if verify:
        oracle = conv_forward_oracle(g, N)
        if M != oracle:
            bad = next(
                (n, k) for n in range(1, N + 1) for k in range(1, n + 1)
                if M[n, k] != oracle[n, k]
            )
            log.warning(
                "conv_forward: closed form with g~(0)=%s disagrees with the q-series "
                "oracle first at %s; using the oracle matrix", empty_divisor_sum, bad,
            )
            return oracle
    return M


def conv_forward_oracle(g, N):
    """[f_k] of (q; q)_inf (1/q) F_L(q) G_L(q), one column per k."""
    gt = as_table(g, N).divisor_sum()
    # G_L(q)/q; its q^N coefficient never meets a nonzero term of q^k/(1-q^k)
    GL = qs.QSeries([gt[m + 1] for m in range(N)] + [0])
    base = qs.series_mul(qs.pochhammer_qq(N), GL)
    rows = [[0] * n for n in range(1, N + 1)]
    for k in range(1, N + 1):
        col = qs.series_mul(base, qs.lambert_term(k, N))
        for n in range(k, N + 1):
            rows[n - 1][k - 1] = col[n]
    return FactorMatrix(rows)


def conv_inverse(g, N, verify=True):
    """s^{(-1)}_{n,k}(g) = sum_{d|n} [q^d](q^{k+1} / ((q;q)_inf G_L(q))) mu(n/d)."""
    table = as_table(g, N)
    if table[1] == 0:
        raise NonInvertibleError("g(1)=0: G_L(q)/q has no reciprocal")
    GL = qs.lambert_gf(table, N).shift(-1)
    H = qs.series_reciprocal(qs.series_mul(qs.pochhammer_qq(N - 1), GL))
    # q^{k+1} / ((q;q) G_L) = q^k H(q), so its q^d coefficient is H[d - k]

    def entry(n, k):
        total = Fraction(0)
        for d in divisors(n):
            if d >= k:
                mu = mobius(n // d)
                if mu:
                    total += mu * H[d - k]
        return total

    inv = FactorMatrix.from_entries(entry, N)
    if verify:
        _check_inverse(conv_forward(table, N, verify=False), inv, "convolution")
    return inv


# -- derivatives -----------------------------------------------------------


def deriv_matrix(t, N):
    """s_{t,n,k} = [q^n] (q;q)_inf q^t D^t[q^k / (1 - q^k)] for t <= k <= n <= N."""
    if t < 1 or N < t:
        raise DomainError(f"need 1 <= t <= N, got t={t}, N={N}")
    E = qs.pochhammer_qq(N)
    dim = N - t + 1
    rows = [[0] * (i + 1) for i in range(dim)]
    for k in range(t, N + 1):
        col = qs.series_mul(E, qs.q_derivative(qs.lambert_term(k, N), t))
        for n in range(k, N + 1):
            rows[n - t][k - t] = col[n]
    return FactorMatrix(rows, start=t)


def deriv_inverse_t1(N, verify=True):
    """s^{(-1)}_{1,n,k} = sum_{d|n} p(d - k) / d * mu(n/d)."""
    inv = _divisor_weight_inverse(lambda d: d, N)
    if verify:
        _check_inverse(deriv_matrix(1, N), inv, "first derivative")
    return inv


def _mixed_weight(j):
    return lambda d: falling_factorial(d, j) + (1 if d < j else 0)


def mixed_deriv_forward(j, N):
    """Matrix of q^j D^j[L_a(q)] + sum_{i<j} (a*1)(i) q^i, factored through (q;q)_inf.

    Built column by column from q-series: column k is the coefficient of a_k.
    """
    if j < 2:
        raise DomainError(f"mixed series needs j >= 2, got {j}")
    E = qs.pochhammer_qq(N)
    rows = [[0] * n for n in range(1, N + 1)]
    for k in range(1, N + 1):
        term = qs.lambert_term(k, N)
        lhs = qs.q_derivative(term, j)
        head = qs.QSeries([term[i] if 1 <= i < j else 0 for i in range(N + 1)])
        col = qs.series_mul(E, lhs + head)
        for n in range(k, N + 1):
            rows[n - 1][k - 1] = col[n]
    return FactorMatrix(rows)


def mixed_deriv_inverse(j, N, verify=True):
    """sum_{d|n} p(d - k) / (d!/(d-j)! + [d < j]) * mu(n/d)."""
    if j < 2:
        raise DomainError(f"mixed series needs j >= 2, got {j}")
    inv = _divisor_weight_inverse(_mixed_weight(j), N)
    if verify:
        _check_inverse(mixed_deriv_forward(j, N), inv, f"mixed derivative j={j}")
    return inv


# -- generic and matrix-based factorizations -------------------------------


def related_fact_matrix(b, N):
    """s_{n,k}(b) = sum_j s_{n,j} b_{j,k} for a lower-triangular table b.

    ``b`` is a FactorMatrix starting at 1, a nested sequence, or a callable
    ``b(j, k)``.
    """
    if isinstance(b, FactorMatrix):
        B = b if b.dim == N else b.block(1, N)
    elif callable(b):
        B = FactorMatrix.from_entries(b, N)
    else:
        B = FactorMatrix([list(r)[: i + 1] for i, r in enumerate(list(b)[:N])])
    return s_base(N) @ B


@lru_cache(maxsize=None)
def _c_entry(n, k):
    total = 0
    for d in divisors(n):
        mu = mobius(n // d)
        if mu:
            total += mu * sum(partition_p(d - i * k) for i in range(1, d // k + 1))
    return total


def c_matrix(N):
    """C_{n,k} = sum_{d|n} sum_{i=1}^{d} p(d - ik) mu(n/d)."""
    return FactorMatrix.from_entries(_c_entry, N)


def reconstruct_b(a, N):
    """b(n) = sum_{k<=n} sum_{j<=k} s_{n,k} C_{k,j} a_j, which equals (a*1)(n)."""
    a = as_table(a, N)
    inner = [None] + [
        sum((_c_entry(k, j) * a[j] for j in range(1, k + 1)), 0) for k in range(1, N + 1)
    ]
    return ArithmeticTable(
        sum((s_value(n, k) * inner[k] for k in range(1, n + 1)), 0)
        for n in range(1, N + 1)
    )
