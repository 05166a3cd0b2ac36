"""Divisor clustering: the measure L(a) of the union of log-scale divisor
neighborhoods, the close-pair count W(a), per-integer bound checks, the
aggregate Cauchy-Schwarz inequality, and truncated weighted sums over
squarefree smooth integers."""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from math import log

import numpy as np

from .errors import RangeError, ResourceLimitError
from .factor import Factorization, PrimeTable, factorize, sieve_primes, squarefree_smooth_stream

LOG2 = math.log(2.0)

# Float tolerance for merging interval endpoints; divisor log points that
# abut exactly in real arithmetic can differ by an ulp in doubles.
MERGE_TOL = 1e-12

_DIVISOR_BUDGET = 1 << 24
_SUBSET_BUDGET = 24


@dataclass(frozen=True)
class IntervalUnion:
    """Disjoint half-open [start, end) intervals, sorted; total measure."""

    intervals: tuple[tuple[float, float], ...]

    @property
    def measure(self) -> float:
        return math.fsum(e - s for s, e in self.intervals)

    @staticmethod
    def from_left_intervals(points, eta: float) -> "IntervalUnion":
        """Union of [p - eta, p) over the given points (any order).

        Intervals that overlap or touch within MERGE_TOL are merged into one
        run, so abutting divisor blocks count as a single interval.
        """
        pts = sorted(points)
        merged: list[list[float]] = []
        for p in pts:
            s, e = p - eta, p
            if merged and s <= merged[-1][1] + MERGE_TOL:
                if e > merged[-1][1]:
                    merged[-1][1] = e
            else:
                merged.append([s, e])
        return IntervalUnion(tuple((s, e) for s, e in merged))


@dataclass(frozen=True)
class ClusterStats:
    """Clustering data for one integer: interval union, L, W, tau."""

    a: int
    union: IntervalUnion
    L: float
    W: int
    tau: int


def cluster_set(a: Factorization) -> ClusterStats:
    """L(a) as the measure of the union of [log d - log 2, log d) over d|a,
    and W(a) as the number of ordered divisor pairs within a factor of 2
    (ratio exactly 2 included)."""
    if a.tau > _DIVISOR_BUDGET:
        raise ResourceLimitError(f"tau({a.n}) = {a.tau} exceeds divisor budget")
    divs = a.divisors()
    union = IntervalUnion.from_left_intervals((log(d) for d in divs), LOG2)
    # |log d/d'| <= log 2  <=>  ceil(d/2) <= d' <= 2d, exact in integers.
    w = 0
    for d in divs:
        lo = bisect_left(divs, (d + 1) // 2)
        hi = bisect_right(divs, 2 * d)
        w += hi - lo
    return ClusterStats(a=a.n, union=union, L=union.measure, W=w, tau=len(divs))


def subsetsum_measure(xs, eta: float) -> float:
    """Measure of the union of [s - eta, s) over all 2^k subset sums s of xs.

    With xs the prime logs of a squarefree integer and eta = log 2 this
    reproduces L(a) exactly.
    """
    xs = list(xs)
    if eta <= 0:
        raise RangeError(f"eta must be positive, got {eta}")
    if any(x < 0 for x in xs):
        raise RangeError("subset elements must be nonnegative")
    if len(xs) > _SUBSET_BUDGET:
        raise ResourceLimitError(f"at most {_SUBSET_BUDGET} elements, got {len(xs)}")
    sums = np.zeros(1)
    for x in xs:
        sums = np.concatenate([sums, sums + x])
    return IntervalUnion.from_left_intervals(sums.tolist(), eta).measure


@dataclass(frozen=True)
class LemmaLReport:
    """Margins (bound minus L) for the per-integer upper bounds on L(a).

    margin_i uses min(tau(a) log 2, log 2 + log a); margin_prefix, present
    only for squarefree a = p1...pk, is the minimum over j of
    2^{k-j} (log(p1...pj) + log 2) minus L(a).
    """

    a: int
    L: float
    margin_i: float
    margin_prefix: float | None

    @property
    def holds(self) -> bool:
        ok = self.margin_i >= -1e-9
        if self.margin_prefix is not None:
            ok = ok and self.margin_prefix >= -1e-9
        return ok


def lemmaL_check(a: Factorization) -> LemmaLReport:
    stats = cluster_set(a)
    bound_i = min(stats.tau * LOG2, LOG2 + log(a.n))
    margin_i = bound_i - stats.L
    margin_prefix = None
    if a.mu_squared == 1:
        k = a.omega
        best = math.inf
        prefix = 0.0
        for j in range(k + 1):
            if j > 0:
                prefix += log(a.factors[j - 1][0])
            best = min(best, 2.0 ** (k - j) * (prefix + LOG2))
        margin_prefix = best - stats.L
    return LemmaLReport(a=a.n, L=stats.L, margin_i=margin_i, margin_prefix=margin_prefix)


@dataclass(frozen=True)
class LWReport:
    """Weighted sums entering sum L(a)/a >= (sum tau(a)/a)^2 / (6 sum W(a)/a)."""

    sum_L: float
    sum_tau: float
    sum_W: float

    @property
    def holds(self) -> bool:
        return self.sum_L >= self.sum_tau**2 / (6.0 * self.sum_W)


def aggregate_LW(A, table: PrimeTable | None = None) -> LWReport:
    """Evaluate the three weighted sums over a finite set of integers and
    check the Cauchy-Schwarz lower bound for sum L(a)/a."""
    elems = sorted(set(int(a) for a in A))
    if not elems or elems[0] < 1:
        raise RangeError("A must be a nonempty set of positive integers")
    if table is None:
        table = sieve_primes(max(2, math.isqrt(elems[-1])))
    sum_L = []
    sum_tau = []
    sum_W = []
    for a in elems:
        st = cluster_set(factorize(a, table))
        sum_L.append(st.L / a)
        sum_tau.append(st.tau / a)
        sum_W.append(st.W / a)
    return LWReport(
        sum_L=math.fsum(sum_L), sum_tau=math.fsum(sum_tau), sum_W=math.fsum(sum_W)
    )


@dataclass(frozen=True)
class TruncatedT:
    """Truncated sum of L(a)/a over squarefree P-smooth a in [Q, a_max],
    with a Rankin-style tail bound for what a_max cut off."""

    value: float
    tail_bound: float
    terms: int


def trunc_T(
    P: int,
    Q: int = 1,
    k_filter: int | None = None,
    a_max: int = 10**5,
    table: PrimeTable | None = None,
) -> TruncatedT:
    """Sum L(a)/a over squarefree a in [Q, a_max] with P+(a) <= P, optionally
    restricted to omega(a) = k_filter.

    The reported tail bound is a_max^{-alpha} * prod_{p<=P}(1 + 2 p^{alpha-1})
    with alpha = 1/log P (Rankin weighting); it is diagnostic, not an error
    guarantee on the untruncated sum.
    """
    if P < 2 or a_max < 1 or Q < 1:
        raise RangeError("need P >= 2, Q >= 1, a_max >= 1")
    if table is None:
        table = sieve_primes(max(2, min(P, a_max)))
    terms = []
    count = 0
    for f in squarefree_smooth_stream(P, a_max, table):
        if f.n < Q:
            continue
        if k_filter is not None and f.omega != k_filter:
            continue
        terms.append(cluster_set(f).L / f.n)
        count += 1
    alpha = 1.0 / math.log(P)
    ps = table.upto(min(P, table.limit)).astype(np.float64)
    tail = a_max**-alpha * float(np.exp(np.sum(np.log1p(2.0 * ps ** (alpha - 1.0)))))
    return TruncatedT(value=math.fsum(terms), tail_bound=tail, terms=count)


def trunc_S(
    t: float, a_max: int, table: PrimeTable | None = None
) -> float:
    """Truncated sum of L(a) / (a log^2(t/a + P+(a))) over squarefree a <= a_max
    with P+(a) <= t; the a = 1 term uses P+(1) = 0, contributing
    log 2 / log^2 t."""
    if t < 16:
        raise RangeError(f"t must be >= 16, got {t}")
    if a_max < 1:
        raise RangeError(f"a_max must be >= 1, got {a_max}")
    P = int(min(t, a_max))
    if table is None:
        table = sieve_primes(max(2, P))
    terms = []
    for f in squarefree_smooth_stream(max(2, P), a_max, table):
        L = cluster_set(f).L
        terms.append(L / (f.n * math.log(t / f.n + f.p_plus) ** 2))
    return math.fsum(terms)
