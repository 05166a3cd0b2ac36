"""Prime generation, factorization, divisor enumeration, prime reciprocal sums.

This is the arithmetic substrate for the rest of the package: a segmented
sieve producing immutable prime tables, trial-division factorization against
a table, the squarefree/squarefull splitting of an integer, weighted prime
reciprocal sums, and an ascending stream of squarefree smooth numbers.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from math import isqrt
from typing import Iterator

import numpy as np

from .errors import InsufficientTableError, RangeError

# Conventions for n = 1: largest prime factor 0, smallest prime factor +inf.
# Named so the sentinels never appear as bare magic numbers in callers.
P_PLUS_OF_ONE = 0
P_MINUS_OF_ONE = math.inf

# Hard bound documented for sieve_primes; sieving stays segmented so working
# memory is O(sqrt(limit) + segment), but the returned table is O(pi(limit)).
SIEVE_LIMIT_MAX = 2**40

_DEFAULT_SEGMENT = 1 << 21  # numbers per segment; ~2 MiB of flags


def _simple_sieve(limit: int) -> np.ndarray:
    """Plain sieve of Eratosthenes for small limits; returns int64 primes."""
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit``, ascending, as an immutable int64 array."""

    limit: int
    primes: np.ndarray

    def __post_init__(self) -> None:
        self.primes.setflags(write=False)

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self) -> Iterator[int]:
        return (int(p) for p in self.primes)

    def __contains__(self, n: int) -> bool:
        i = int(np.searchsorted(self.primes, n))
        return i < len(self.primes) and int(self.primes[i]) == n

    def upto(self, x: float) -> np.ndarray:
        """Primes <= x as an array view; raises if x exceeds the table."""
        if x > self.limit:
            raise InsufficientTableError(
                f"table covers primes <= {self.limit}, need {x}"
            )
        return self.primes[: int(np.searchsorted(self.primes, x, side="right"))]


def sieve_primes(limit: int, segment_size: int = _DEFAULT_SEGMENT) -> PrimeTable:
    """Segmented sieve of Eratosthenes.

    Parameters
    ----------
    limit : int
        Inclusive upper bound, 2 <= limit <= 2**40.
    segment_size : int
        Numbers per segment. The default suits L2-cache-sized blocks; the
        exact value only affects speed, never results.

    Returns
    -------
    PrimeTable
    """
    if limit < 2 or limit > SIEVE_LIMIT_MAX:
        raise RangeError(f"limit must be in [2, 2**40], got {limit}")
    root = isqrt(limit)
    base = _simple_sieve(max(root, 2))
    if limit <= max(root, 2):
        return PrimeTable(limit, base[base <= limit])

    chunks = [base]
    lo = root + 1
    while lo <= limit:
        hi = min(lo + segment_size, limit + 1)  # half-open [lo, hi)
        flags = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            flags[start - lo :: p] = False
        chunks.append(np.flatnonzero(flags).astype(np.int64) + lo)
        lo = hi
    return PrimeTable(limit, np.concatenate(chunks))


@dataclass(frozen=True)
class Factorization:
    """An integer with its sorted (prime, exponent) decomposition."""

    n: int
    factors: tuple[tuple[int, int], ...]
    _divisors: list[int] | None = field(default=None, repr=False, compare=False)

    @property
    def omega(self) -> int:
        """Number of distinct prime factors."""
        return len(self.factors)

    @property
    def tau(self) -> int:
        """Number of positive divisors."""
        t = 1
        for _, e in self.factors:
            t *= e + 1
        return t

    @property
    def mu_squared(self) -> int:
        """1 if squarefree, else 0."""
        return 1 if all(e == 1 for _, e in self.factors) else 0

    @property
    def p_plus(self) -> int:
        """Largest prime factor; P_PLUS_OF_ONE for n = 1."""
        return self.factors[-1][0] if self.factors else P_PLUS_OF_ONE

    @property
    def p_minus(self) -> float:
        """Smallest prime factor; P_MINUS_OF_ONE for n = 1."""
        return self.factors[0][0] if self.factors else P_MINUS_OF_ONE

    def divisors(self) -> list[int]:
        """All positive divisors of n, ascending."""
        divs = [1]
        for p, e in self.factors:
            pk = 1
            ext = []
            for _ in range(e):
                pk *= p
                ext.extend(d * pk for d in divs)
            divs.extend(ext)
        divs.sort()
        return divs

    def recompose(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out


def factorize(n: int, table: PrimeTable) -> Factorization:
    """Factor n by trial division against the table's primes.

    The table must be able to certify the final cofactor prime: either
    table.limit**2 >= n or the table covers all primes <= n.
    """
    if n < 1:
        raise RangeError(f"n must be positive, got {n}")
    if n == 1:
        return Factorization(1, ())
    factors = []
    m = n
    for p in table.primes:
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    if m > 1:
        # m has no prime factor <= min(table.limit, sqrt(m)); it is certified
        # prime only if the table reaches sqrt(m).
        if m > table.limit * table.limit:
            raise InsufficientTableError(
                f"cofactor {m} not certified prime by table with limit {table.limit}"
            )
        factors.append((m, 1))
    factors.sort()
    return Factorization(n, tuple(factors))


def split_squarefull(n: int, table: PrimeTable | None = None) -> tuple[int, int]:
    """Split n = nprime * ndoubleprime with nprime squarefree, ndoubleprime
    squarefull, and the two parts coprime.

    Primes with exponent 1 go to the squarefree part, everything else to the
    squarefull part.
    """
    if n < 1:
        raise RangeError(f"n must be positive, got {n}")
    if table is None:
        table = sieve_primes(max(2, isqrt(n)))
    f = factorize(n, table)
    nprime = 1
    ndp = 1
    for p, e in f.factors:
        if e == 1:
            nprime *= p
        else:
            ndp *= p**e
    return nprime, ndp


def mertens_sum(x: float, table: PrimeTable, weight_alpha: float = 0.0) -> float:
    """Sum of p**-(1 - weight_alpha) over primes p <= x.

    weight_alpha = 0 gives the plain reciprocal sum (log log x + c0 + o(1));
    small positive weights give the smoothed variant used for Rankin-style
    bounds. Summation is exactly rounded (math.fsum), so the result is
    reproducible to well under 1e-12 relative error.
    """
    if x < 2:
        raise RangeError(f"x must be >= 2, got {x}")
    if not 0.0 <= weight_alpha <= 0.1:
        raise RangeError(f"weight_alpha must be in [0, 0.1], got {weight_alpha}")
    ps = table.upto(x).astype(np.float64)
    return math.fsum(np.power(ps, weight_alpha - 1.0))


def squarefree_smooth_stream(
    P: int, a_max: int, table: PrimeTable | None = None
) -> Iterator[Factorization]:
    """Yield every squarefree a <= a_max with all prime factors <= P,
    ascending, each with its factorization. a = 1 is always included."""
    if P < 2:
        raise RangeError(f"P must be >= 2, got {P}")
    if a_max < 1:
        raise RangeError(f"a_max must be >= 1, got {a_max}")
    if table is None:
        table = sieve_primes(min(P, a_max) if min(P, a_max) >= 2 else 2)
    primes = [int(p) for p in table.upto(min(P, a_max))]

    items: list[tuple[int, tuple[tuple[int, int], ...]]] = []

    def extend(value: int, start: int, factors: tuple[tuple[int, int], ...]) -> None:
        items.append((value, factors))
        for i in range(start, len(primes)):
            p = primes[i]
            if value * p > a_max:
                break
            extend(value * p, i + 1, factors + ((p, 1),))

    extend(1, 0, ())
    items.sort()
    for value, factors in items:
        yield Factorization(value, factors)


def count_rough(x: int, z: float) -> int:
    """|{n <= x : P^-(n) > z}| by direct sieving; n = 1 counts (P^-(1) = inf).

    Used to check the classical sieve bound empirically: the count is of
    order x / log z for x >= 2z >= 4.
    """
    if x < 1:
        raise RangeError(f"x must be >= 1, got {x}")
    keep = np.ones(x + 1, dtype=bool)
    keep[0] = False
    for p in _simple_sieve(max(2, int(z))):
        p = int(p)
        if p > z:
            break
        keep[p::p] = False
    return int(np.count_nonzero(keep))


def divisors_upto(limit: int) -> list[list[int]]:
    """Divisor lists for every n <= limit, built by one pass over multiples.

    Index d of the result is the sorted divisor list of d. Memory is
    O(limit log limit); intended for oracle-style scans at small limits.
    """
    divs: list[list[int]] = [[] for _ in range(limit + 1)]
    for d in range(1, limit + 1):
        for m in range(d, limit + 1, d):
            divs[m].append(d)
    return divs


def tau_window_of_list(divs: list[int], y: float, z: float) -> int:
    """Count divisors in (y, z] given a sorted divisor list."""
    return bisect_right(divs, z) - bisect_right(divs, y)
