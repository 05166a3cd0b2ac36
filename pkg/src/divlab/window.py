"""Exact divisor-window counts H(x,y,z), the multiplication-table count A(x),
and normalized density diagnostics.

H(x,y,z) is the number of n <= x with an integer divisor d, y < d <= z.
Counting marks all multiples of every window divisor in a bitset; the
independent oracle re-counts either by inclusion-exclusion over divisor lcms
or by a per-n divisibility scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from .errors import OracleLimitError, RangeError, ResourceLimitError

# Log-density loss exponent for windows (y, 2y]; kept as a formula, checked
# against its leading digits in the test suite.
DELTA = 1.0 - (1.0 + math.log(math.log(2.0))) / math.log(2.0)

DEFAULT_BIT_BUDGET = 2**31  # bits of bitset, i.e. 256 MiB

# Below this x a one-byte-per-integer buffer is used (cheap slice writes);
# above it, a packed bitset keeps x = 10^9 inside the 256 MiB budget.
_BYTE_PATH_MAX = 1 << 24

_ones_cache = b""


def _ones(n: int) -> bytes:
    global _ones_cache
    if len(_ones_cache) < n:
        _ones_cache = b"\x01" * n
    return _ones_cache[:n]


@dataclass(frozen=True)
class WindowQuery:
    """A count request: integers n <= x with a divisor in (y, z]."""

    x: int
    y: float
    z: float

    def __post_init__(self) -> None:
        if self.x < 1:
            raise RangeError(f"x must be a positive integer, got {self.x}")
        if not 0 < self.y < self.z:
            raise RangeError(f"need 0 < y < z, got y={self.y}, z={self.z}")

    def divisor_range(self) -> tuple[int, int]:
        """Integer divisors to consider: [floor(y)+1, floor(min(z, x))]."""
        return math.floor(self.y) + 1, min(math.floor(self.z), self.x)


def tau_window(n: int, y: float, z: float) -> int:
    """Number of divisors of n in (y, z], by trial division."""
    if n < 1:
        raise RangeError(f"n must be positive, got {n}")
    if not 0 < y < z:
        raise RangeError(f"need 0 < y < z, got y={y}, z={z}")
    count = 0
    for i in range(1, isqrt(n) + 1):
        if n % i == 0:
            if y < i <= z:
                count += 1
            j = n // i
            if j != i and y < j <= z:
                count += 1
    return count


def _check_budget(x: int, bit_budget: int) -> None:
    if x + 1 > bit_budget:
        raise ResourceLimitError(
            f"x={x} exceeds the bitset budget of {bit_budget} bits "
            f"(override with bit_budget)"
        )


def _mark_bytes(buf: bytearray, d: int, mlo: int, mhi: int) -> None:
    """Set buf[d*m] = 1 for mlo <= m <= mhi."""
    cnt = mhi - mlo + 1
    if cnt > 0:
        buf[d * mlo : d * mhi + 1 : d] = _ones(cnt)


def _mark_bits(buf: np.ndarray, d: int, mlo: int, mhi: int) -> None:
    """Set bit d*m of the packed bitset for mlo <= m <= mhi.

    Multiples with the same residue of m modulo 8/gcd(d,8) land on the same
    bit position within a byte and advance by a fixed byte stride, so each
    residue class is one strided OR.
    """
    if mhi < mlo:
        return
    period = 8 // gcd(d, 8)
    stride = d * period >> 3
    for m0 in range(mlo, min(mlo + period, mhi + 1)):
        n0 = d * m0
        cnt = (mhi - m0) // period + 1
        byte0 = n0 >> 3
        bit = np.uint8(1 << (n0 & 7))
        buf[byte0 : byte0 + (cnt - 1) * stride + 1 : stride] |= bit


def _count_marked(
    x: int, jobs: list[tuple[int, int, int]], bit_budget: int
) -> int:
    """Mark d*m for each job (d, mlo, mhi) in a bitset over [0, x]; count."""
    _check_budget(x, bit_budget)
    if x <= _BYTE_PATH_MAX:
        buf = bytearray(x + 1)
        for d, mlo, mhi in jobs:
            _mark_bytes(buf, d, mlo, mhi)
        return buf.count(1)
    buf = np.zeros((x >> 3) + 1, dtype=np.uint8)
    for d, mlo, mhi in jobs:
        _mark_bits(buf, d, mlo, mhi)
    return int(np.sum(np.bitwise_count(buf), dtype=np.int64))


def count_window(q: WindowQuery, bit_budget: int = DEFAULT_BIT_BUDGET) -> int:
    """Exact H(x,y,z) by marking multiples of every divisor in the window."""
    dlo, dhi = q.divisor_range()
    if dlo > dhi:
        return 0
    jobs = [(d, 1, q.x // d) for d in range(dlo, dhi + 1)]
    return _count_marked(q.x, jobs, bit_budget)


_ORACLE_SCAN_MAX = 10**5
_ORACLE_IE_MAX_DIVISORS = 64

# (dlo, dhi) -> cumulative counts C with C[n] = H(n, dlo-1, dhi); cached so
# repeated small-x oracle calls on the same window cost O(1).
_scan_cache: dict[tuple[int, int], np.ndarray] = {}


def _scan_cumulative(dlo: int, dhi: int, limit: int) -> np.ndarray:
    key = (dlo, dhi)
    cached = _scan_cache.get(key)
    if cached is not None and len(cached) > limit:
        return cached
    n = np.arange(limit + 1, dtype=np.int64)
    hit = np.zeros(limit + 1, dtype=bool)
    for d in range(dlo, dhi + 1):
        hit |= n % d == 0
    hit[0] = False
    cum = np.cumsum(hit, dtype=np.int64)
    if len(_scan_cache) > 256:
        _scan_cache.clear()
    _scan_cache[key] = cum
    return cum


def _ie_count(x: int, divisors: list[int]) -> int:
    """Inclusion-exclusion over lcms of the window divisors; branches whose
    lcm already exceeds x contribute nothing and are pruned."""

    def dfs(start: int, l: int, sign: int) -> int:
        s = 0
        for j in range(start, len(divisors)):
            l2 = l * divisors[j] // gcd(l, divisors[j])
            if l2 > x:
                continue
            s += sign * (x // l2) + dfs(j + 1, l2, -sign)
        return s

    return dfs(0, 1, +1)


def count_window_oracle(q: WindowQuery) -> int:
    """Exact H(x,y,z) by an independent route (no multiple-marking).

    For x <= 10^5 uses a per-n divisibility scan; otherwise requires at most
    64 integers in the window and uses inclusion-exclusion over lcms.
    """
    dlo, dhi = q.divisor_range()
    if dlo > dhi:
        return 0
    if q.x <= _ORACLE_SCAN_MAX:
        return int(_scan_cumulative(dlo, dhi, q.x)[q.x])
    if dhi - dlo + 1 <= _ORACLE_IE_MAX_DIVISORS:
        return _ie_count(q.x, list(range(dlo, dhi + 1)))
    raise OracleLimitError(
        f"oracle needs x <= {_ORACLE_SCAN_MAX} or a window of at most "
        f"{_ORACLE_IE_MAX_DIVISORS} divisors; got x={q.x}, "
        f"window size {dhi - dlo + 1}"
    )


def mult_table_count(x: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> int:
    """A(x): distinct products m1*m2 <= x with both factors <= sqrt(x)."""
    if x < 1:
        raise RangeError(f"x must be positive, got {x}")
    s = isqrt(x)
    jobs = [(m1, m1, s) for m1 in range(1, s + 1)]
    return _count_marked(x, jobs, bit_budget)


# Density formula needs (log log y)^{3/2} comfortably positive.
_Y_MIN = math.e**math.e


@dataclass(frozen=True)
class DensityPoint:
    """H(x,y,2y) with its theorem-normalized density."""

    x: int
    y: float
    h: int
    rho: float


def normalized_density(
    x: int, y: float, bit_budget: int = DEFAULT_BIT_BUDGET
) -> DensityPoint:
    """h = H(x,y,2y) and rho = h (log y)^delta (log log y)^{3/2} / x.

    Requires y > e^e so the double log is safely positive; y at or beyond x
    is legal and yields h = rho = 0.
    """
    if y <= _Y_MIN:
        raise RangeError(f"y must exceed e^e ~ {_Y_MIN:.3f}, got {y}")
    h = count_window(WindowQuery(x, y, 2.0 * y), bit_budget)
    rho = h * math.log(y) ** DELTA * math.log(math.log(y)) ** 1.5 / x
    return DensityPoint(x=x, y=y, h=h, rho=rho)


@dataclass(frozen=True)
class SandwichReport:
    """Both sides of the multiplication-table sandwich around A(x)."""

    x: int
    lower: int
    a_x: int
    upper: int

    @property
    def holds(self) -> bool:
        return self.lower <= self.a_x <= self.upper


def sandwich_check(x: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> SandwichReport:
    """Check H(x/4, sqrt(x)/4, sqrt(x)/2) <= A(x) <= sum over dyadic scales
    of H(x/2^k, sqrt(x)/2^{k+1}, sqrt(x)/2^k), all three computed exactly."""
    if x < 16:
        raise RangeError(f"x must be >= 16, got {x}")
    r = math.sqrt(x)
    lower = count_window(WindowQuery(x // 4, r / 4.0, r / 2.0), bit_budget)
    a_x = mult_table_count(x, bit_budget)
    upper = 0
    k = 0
    while 2**k <= r:
        upper += count_window(
            WindowQuery(x >> k, r / 2 ** (k + 1), r / 2**k), bit_budget
        )
        k += 1
    return SandwichReport(x=x, lower=lower, a_x=a_x, upper=upper)
