"""Scalar number-theoretic functions.

Everything here is exact (int or :class:`fractions.Fraction`) except
:func:`von_mangoldt`, which returns an ``mpmath.mpf`` at a caller-chosen
binary precision.
"""

import math
import os
import struct
import threading
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import DomainError

__all__ = [
    "ArithmeticTable",
    "PartitionCache",
    "as_table",
    "binomial",
    "divisors",
    "factorize",
    "falling_factorial",
    "function_registry",
    "mobius",
    "omega_distinct",
    "partition_p",
    "pentagonal_g",
    "pentagonal_shifts",
    "resolve_function",
    "sigma",
    "stirling1_unsigned",
    "stirling2",
    "t_div",
    "totients",
    "von_mangoldt",
]


class ArithmeticTable:
    """The values a(1), ..., a(N) of an arithmetic function.

    Indexing is 1-based, matching the usual number-theoretic convention.
    ``domain`` is ``"exact"`` for int/Fraction values and ``"real"`` for
    mpmath values; the two are never mixed inside one computation.
    """

    __slots__ = ("_values", "domain")

    def __init__(self, values, domain="exact"):
        if domain not in ("exact", "real"):
            raise DomainError(f"unknown scalar domain {domain!r}")
        self._values = tuple(values)
        self.domain = domain

    @classmethod
    def from_function(cls, fn, N, domain="exact"):
        return cls((fn(n) for n in range(1, N + 1)), domain)

    @property
    def size(self):
        return len(self._values)

    def __len__(self):
        return len(self._values)

    def __getitem__(self, n):
        if isinstance(n, slice):
            raise TypeError("ArithmeticTable does not support slicing")
        if not 1 <= n <= len(self._values):
            raise IndexError(f"a({n}) outside 1..{len(self._values)}")
        return self._values[n - 1]

    def __iter__(self):
        return iter(self._values)

    def __eq__(self, other):
        if isinstance(other, ArithmeticTable):
            return self._values == other._values
        return NotImplemented

    def __repr__(self):
        head = ", ".join(str(v) for v in self._values[:8])
        tail = ", ..." if len(self._values) > 8 else ""
        return f"ArithmeticTable([{head}{tail}], N={len(self._values)})"

    def values(self):
        return list(self._values)

    def truncate(self, N):
        if N > len(self._values):
            raise IndexError(f"cannot extend a table of size {len(self)} to {N}")
        return ArithmeticTable(self._values[:N], self.domain)

    def divisor_sum(self):
        """Table of (a * 1)(n) = sum_{d|n} a(d)."""
        N = len(self._values)
        out = [0] * (N + 1)
        for d in range(1, N + 1):
            ad = self._values[d - 1]
            for m in range(d, N + 1, d):
                out[m] += ad
        return ArithmeticTable(out[1:], self.domain)

    def mobius_inverse(self):
        """Table of sum_{d|n} a(d) mu(n/d)."""
        N = len(self._values)
        out = [0] * (N + 1)
        for d in range(1, N + 1):
            ad = self._values[d - 1]
            for j in range(1, N // d + 1):
                mu = mobius(j)
                if mu:
                    out[d * j] += mu * ad
        return ArithmeticTable(out[1:], self.domain)


def as_table(a, N, domain="exact"):
    """Coerce a callable, sequence or ArithmeticTable to a table of size N."""
    if isinstance(a, ArithmeticTable):
        if len(a) < N:
            raise DomainError(f"table has {len(a)} entries, {N} are needed")
        return a if len(a) == N else a.truncate(N)
    if callable(a):
        return ArithmeticTable.from_function(a, N, domain)
    values = list(a)
    if len(values) < N:
        raise DomainError(f"sequence has {len(values)} entries, {N} are needed")
    return ArithmeticTable(values[:N], domain)


# -- divisibility ---------------------------------------------------------


def divisors(n):
    """All positive divisors of n in increasing order."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"divisors() needs a positive integer, got {n!r}")
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def t_div(n, k):
    """1 if k divides n, else 0."""
    if n < 1 or k < 1:
        raise DomainError(f"t_div needs n, k >= 1, got ({n}, {k})")
    return 1 if n % k == 0 else 0


@lru_cache(maxsize=None)
def factorize(n):
    """Prime factorization as a tuple of (prime, exponent) pairs."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def mobius(n):
    if n < 1:
        raise DomainError(f"mobius needs n >= 1, got {n}")
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def omega_distinct(n):
    """Number of distinct primes dividing n, by trial division."""
    return len(factorize(n))


def sigma(n, alpha):
    """Generalized divisor sum sigma_alpha(n) as an exact Fraction."""
    if n < 1:
        raise DomainError(f"sigma needs n >= 1, got {n}")
    if alpha >= 0:
        return Fraction(sum(d**alpha for d in divisors(n)))
    return sum((Fraction(1, d**-alpha) for d in divisors(n)), Fraction(0))


def totients(n, t):
    """Jordan totient J_t(n); t = 1 gives Euler's phi."""
    if n < 1 or t < 1:
        raise DomainError(f"totients needs n, t >= 1, got ({n}, {t})")
    return sum(d**t * mobius(n // d) for d in divisors(n))


def von_mangoldt(n, precision=128):
    """Lambda(n) = log p when n is a power of the prime p, else 0."""
    if n < 1:
        raise DomainError(f"von_mangoldt needs n >= 1, got {n}")
    with mpmath.workprec(precision):
        f = factorize(n)
        if len(f) != 1:
            return mpmath.mpf(0)
        return mpmath.log(f[0][0])


# -- partitions and pentagonal numbers ------------------------------------


def pentagonal_g(j):
    """Interleaved generalized pentagonal numbers 0, 1, 2, 5, 7, 12, 15, ..."""
    if j < 0:
        raise DomainError(f"pentagonal_g needs j >= 0, got {j}")
    return ((j + 1) // 2) * ((3 * j + 2) // 2) // 2


def pentagonal_shifts(M):
    """(sign, shift) pairs of the pentagonal correction sum up to shift M.

    Enumerates b = +1, -1 and 1 <= j <= floor((sqrt(24M + 1) - b) / 6), i.e.
    every shift j(3j + b)/2 <= M, with sign (-1)^j. The floor is taken with
    integer square roots: for integer r and 0 <= x < 1, floor((r + x)/6) equals
    floor(r/6), so isqrt gives the exact bound. Negative M yields nothing.
    """
    if M < 0:
        return []
    root = math.isqrt(24 * M + 1)
    out = []
    for b in (1, -1):
        for j in range(1, (root - b) // 6 + 1):
            out.append((-1 if j % 2 else 1, j * (3 * j + b) // 2))
    return out


class PartitionCache:
    """Memoized partition numbers p(0..N) and pentagonal numbers G_0..G_J.

    Tables only ever grow; an entry is never rewritten once filled. Growth
    happens under a lock so concurrent readers see a consistent prefix.
    """

    def __init__(self):
        self.p_table = [1]
        self.pent_table = [0]
        self._lock = threading.Lock()

    def _extend_pent(self, limit):
        while self.pent_table[-1] <= limit:
            self.pent_table.append(pentagonal_g(len(self.pent_table)))

    def extend(self, N):
        if N < len(self.p_table):
            return
        with self._lock:
            self._extend_pent(N)
            p = self.p_table
            G = self.pent_table
            for n in range(len(p), N + 1):
                total = 0
                j = 1
                while G[j] <= n:
                    # sign (-1)^(ceil(j/2) + 1)
                    if (j + 1) // 2 % 2:
                        total += p[n - G[j]]
                    else:
                        total -= p[n - G[j]]
                    j += 1
                p.append(total)

    def p(self, n):
        if n < 0:
            return 0
        if n >= len(self.p_table):
            self.extend(n)
        return self.p_table[n]

    def pentagonal(self, j):
        if j >= len(self.pent_table):
            with self._lock:
                while len(self.pent_table) <= j:
                    self.pent_table.append(pentagonal_g(len(self.pent_table)))
        return self.pent_table[j]

    # p(n) persistence: each value is an unsigned little-endian integer
    # preceded by its byte length as a little-endian uint64.

    def save(self, path):
        with open(path, "wb") as fh:
            for value in self.p_table:
                raw = value.to_bytes(max(1, (value.bit_length() + 7) // 8), "little")
                fh.write(struct.pack("<Q", len(raw)))
                fh.write(raw)

    @classmethod
    def load(cls, path):
        cache = cls()
        with open(path, "rb") as fh:
            data = fh.read()
        values = []
        pos = 0
        while pos < len(data):
            if pos + 8 > len(data):
                raise ValueError(f"truncated partition cache file {path}")
            (length,) = struct.unpack_from("<Q", data, pos)
            pos += 8
            if pos + length > len(data):
                raise ValueError(f"truncated partition cache file {path}")
            values.append(int.from_bytes(data[pos:pos + length], "little"))
            pos += length
        if not values or values[0] != 1:
            raise ValueError(f"{path} does not hold a partition table")
        cache.p_table = values
        cache._extend_pent(len(values))
        return cache


CACHE_ENV_VAR = "LAMBERTFACT_CACHE_DIR"
_CACHE_FILE = "partitions.bin"


def _initial_cache():
    directory = os.environ.get(CACHE_ENV_VAR)
    if directory:
        path = os.path.join(directory, _CACHE_FILE)
        if os.path.exists(path):
            try:
                return PartitionCache.load(path)
            except (OSError, ValueError):
                pass
    return PartitionCache()


_CACHE = _initial_cache()


def default_cache():
    return _CACHE


def persist_cache():
    """Write the shared p(n) table to $LAMBERTFACT_CACHE_DIR, if set."""
    directory = os.environ.get(CACHE_ENV_VAR)
    if not directory:
        return None
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, _CACHE_FILE)
    _CACHE.save(path)
    return path


def partition_p(n):
    """Number of partitions of n; 0 for negative n."""
    return _CACHE.p(n)


# -- combinatorial triangles ---------------------------------------------


@lru_cache(maxsize=None)
def stirling1_unsigned(n, m):
    if n < 0 or m < 0 or m > n:
        return 0
    if n == 0:
        return 1
    if m == 0:
        return 0
    return (n - 1) * stirling1_unsigned(n - 1, m) + stirling1_unsigned(n - 1, m - 1)


@lru_cache(maxsize=None)
def stirling2(m, k):
    if m < 0 or k < 0 or k > m:
        return 0
    if m == 0:
        return 1
    if k == 0:
        return 0
    return k * stirling2(m - 1, k) + stirling2(m - 1, k - 1)


def falling_factorial(a, b):
    """a (a - 1) ... (a - b + 1); 1 when b = 0."""
    out = 1
    for i in range(b):
        out *= a - i
    return out


def binomial(a, b):
    """Binomial coefficient, extended polynomially to negative a."""
    if b < 0:
        return 0
    if a >= 0:
        return math.comb(a, b)
    return falling_factorial(a, b) // math.factorial(b)


# -- named functions -----------------------------------------------------


def _npow(k):
    return lambda n: n**k


_REGISTRY = {
    "one": lambda n: 1,
    "id": lambda n: n,
    "mu": mobius,
    "phi": lambda n: totients(n, 1),
    "sigma1": lambda n: int(sigma(n, 1)),
    "delta1": lambda n: 1 if n == 1 else 0,
    "absmu": lambda n: abs(mobius(n)),
}


def function_registry():
    """Names accepted by :func:`resolve_function` (plus ``npow:k``)."""
    return sorted(_REGISTRY) + ["npow:k"]


def resolve_function(name):
    """Look up an arithmetic function by registry name."""
    if name in _REGISTRY:
        return _REGISTRY[name]
    if name.startswith("npow:"):
        try:
            k = int(name[5:])
        except ValueError:
            raise DomainError(f"bad exponent in {name!r}") from None
        return _npow(k)
    raise DomainError(
        f"unknown function {name!r}; choose from {', '.join(function_registry())}"
    )
