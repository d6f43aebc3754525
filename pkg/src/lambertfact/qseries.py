"""Truncated formal power series in q with exact rational coefficients.

This is the brute-force side of every check in the package: generating
functions are built term by term and multiplied out, with no use of the
closed forms being tested.
"""

from fractions import Fraction

from .arith import ArithmeticTable, as_table, falling_factorial, mobius
from .errors import DomainError, NonInvertibleError

__all__ = [
    "QSeries",
    "hadamard_coeffs",
    "lambert_gf",
    "lambert_term",
    "pochhammer_qq",
    "q_derivative",
    "series_mul",
    "series_reciprocal",
]


class QSeries:
    """Coefficients of q^0..q^order; anything beyond ``order`` is unknown.

    Arithmetic between series of different orders truncates to the smaller
    order rather than raising.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs):
        c = tuple(v if isinstance(v, Fraction) else Fraction(v) for v in coeffs)
        if not c:
            raise DomainError("a series needs at least a constant term")
        self._c = c

    @classmethod
    def zero(cls, order):
        return cls([0] * (order + 1))

    @classmethod
    def one(cls, order):
        return cls.monomial(0, order)

    @classmethod
    def monomial(cls, k, order, c=1):
        coeffs = [0] * (order + 1)
        if k <= order:
            coeffs[k] = c
        return cls(coeffs)

    @property
    def order(self):
        return len(self._c) - 1

    @property
    def coeffs(self):
        return self._c

    def __getitem__(self, n):
        if not 0 <= n <= self.order:
            raise IndexError(f"[q^{n}] is not known for a series of order {self.order}")
        return self._c[n]

    def __len__(self):
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    def __eq__(self, other):
        if isinstance(other, QSeries):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        terms = []
        for n, c in enumerate(self._c):
            if c:
                terms.append(f"{c}*q^{n}" if n else str(c))
        body = " + ".join(terms) if terms else "0"
        return f"QSeries({body} + O(q^{self.order + 1}))"

    def truncate(self, order):
        if order > self.order:
            raise DomainError(f"cannot raise order {self.order} to {order}")
        return QSeries(self._c[: order + 1])

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        n = min(self.order, other.order) + 1
        return QSeries([a + b for a, b in zip(self._c[:n], other._c[:n])])

    def __sub__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        n = min(self.order, other.order) + 1
        return QSeries([a - b for a, b in zip(self._c[:n], other._c[:n])])

    def __neg__(self):
        return QSeries([-a for a in self._c])

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return series_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return QSeries([a * other for a in self._c])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries([a * other for a in self._c])
        return NotImplemented

    def shift(self, k):
        """Multiply by q^k (k may be negative if the low terms vanish)."""
        if k >= 0:
            return QSeries(([0] * k + list(self._c))[: self.order + 1])
        if any(self._c[:-k]):
            raise DomainError(f"series is not divisible by q^{-k}")
        return QSeries(self._c[-k:])

    def reciprocal(self):
        return series_reciprocal(self)

    def derivative(self, t):
        return q_derivative(self, t)


def series_mul(a, b):
    """Cauchy product truncated to the smaller of the two orders."""
    N = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    nz = [(i, ac[i]) for i in range(N + 1) if ac[i]]
    out = [Fraction(0)] * (N + 1)
    for i, ai in nz:
        for j in range(N + 1 - i):
            bj = bc[j]
            if bj:
                out[i + j] += ai * bj
    return QSeries(out)


def series_reciprocal(f):
    """1/f to the order of f, by g_n = -(1/f_0) sum_{j=1}^n f_j g_{n-j}."""
    c = f.coeffs
    if c[0] == 0:
        raise NonInvertibleError("series has zero constant term and no reciprocal")
    inv0 = 1 / c[0]
    g = [inv0]
    for n in range(1, f.order + 1):
        acc = Fraction(0)
        for j in range(1, n + 1):
            if c[j]:
                acc += c[j] * g[n - j]
        g.append(-acc * inv0)
    return QSeries(g)


def pochhammer_qq(N):
    """(q; q)_infinity truncated to order N, expanded as prod (1 - q^k)."""
    if N < 0:
        raise DomainError(f"order must be non-negative, got {N}")
    c = [0] * (N + 1)
    c[0] = 1
    # multiply by (1 - q^k) in place, high degree first
    for k in range(1, N + 1):
        for n in range(N, k - 1, -1):
            c[n] -= c[n - k]
    return QSeries(c)


def lambert_term(k, N):
    """q^k / (1 - q^k) to order N."""
    c = [0] * (N + 1)
    for m in range(k, N + 1, k):
        c[m] = 1
    return QSeries(c)


def lambert_gf(a, N):
    """sum_{n>=1} a_n q^n / (1 - q^n) to order N, summed term by term."""
    a = as_table(a, N)
    c = [Fraction(0)] * (N + 1)
    for k in range(1, N + 1):
        ak = a[k]
        if ak:
            for m in range(k, N + 1, k):
                c[m] += ak
    return QSeries(c)


def q_derivative(f, t):
    """q^t (d/dq)^t applied to f: multiplies [q^n] by n (n-1) ... (n-t+1)."""
    if t < 1:
        raise DomainError(f"derivative order must be >= 1, got {t}")
    return QSeries([falling_factorial(n, t) * c for n, c in enumerate(f.coeffs)])


def hadamard_coeffs(f, g, N):
    """The a_fg table whose Lambert series has coefficients f~(n) g~(n).

    f~ and g~ are divisor sums of f and g; a_fg is the Mobius inverse of
    their product.
    """
    ft = as_table(f, N).divisor_sum()
    gt = as_table(g, N).divisor_sum()
    prod = [ft[n] * gt[n] for n in range(1, N + 1)]
    out = [0] * (N + 1)
    for d in range(1, N + 1):
        for j in range(1, N // d + 1):
            mu = mobius(j)
            if mu:
                out[d * j] += prod[d - 1] * mu
    return ArithmeticTable(out[1:])
