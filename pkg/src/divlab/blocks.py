"""Greedy prime-block partitions.

Primes are packed left to right into consecutive blocks (lambda_{j-1},
lambda_j], each block absorbing primes while its weighted reciprocal sum
sum p^-(1-alpha) stays within the budget log 2. The closing primes roughly
square from block to block, so log lambda_j doubles; empirical_K measures
the defect from exact doubling.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from .errors import RangeError
from .factor import PrimeTable, sieve_primes

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class PrimePartition:
    """Greedy block boundaries over all primes <= limit.

    lambdas[i] is the prime closing block index_base + i; block_sums[i] is
    that block's weighted sum. Every block holds at least one prime; a block
    whose first prime alone exceeds the budget is kept as an overfull
    singleton (only possible for large weight_alpha).
    """

    limit: int
    lambda0: float
    lambdas: tuple[int, ...]
    block_sums: tuple[float, ...]
    weight_alpha: float
    index_base: int = 1
    budget: float = LOG2

    @property
    def nblocks(self) -> int:
        return len(self.lambdas)

    @property
    def ncomplete(self) -> int:
        """Blocks closed by the budget rule; the final block merely ran out
        of primes at the limit and is not greedy-maximal."""
        return self.nblocks - 1

    def indices(self) -> range:
        return range(self.index_base, self.index_base + self.nblocks)


def build_partition(
    limit: int,
    weight_alpha: float = 0.0,
    lambda0: float = 1.9,
    index_base: int = 1,
    table: PrimeTable | None = None,
) -> PrimePartition:
    """Greedily partition the primes in (lambda0, limit].

    Each block is extended while its compensated sum of p^-(1-weight_alpha)
    stays <= log 2, then closed; the final block simply ends at the last
    prime <= limit.
    """
    if limit < 2:
        raise RangeError(f"limit must be >= 2, got {limit}")
    if not 0.0 <= weight_alpha < 1.0:
        raise RangeError(f"weight_alpha must be in [0, 1), got {weight_alpha}")
    if table is None:
        table = sieve_primes(limit)
    primes = table.upto(limit)
    primes = primes[primes > lambda0]
    if len(primes) == 0:
        raise RangeError(f"no primes in ({lambda0}, {limit}]")
    weights = np.power(primes.astype(np.float64), weight_alpha - 1.0)

    lambdas: list[int] = []
    sums: list[float] = []
    # Kahan accumulation: block sums land very close to log 2 by design, so
    # the close/extend decision must not hinge on rounding drift.
    acc = 0.0
    comp = 0.0
    in_block = False
    prev_p = 0
    for p, w in zip(primes.tolist(), weights.tolist()):
        t = w - comp
        s = acc + t
        if in_block and s > LOG2:
            lambdas.append(prev_p)
            sums.append(acc)
            acc = 0.0
            comp = 0.0
            s = w
            t = w
        comp = (s - acc) - t
        acc = s
        in_block = True
        prev_p = p
    lambdas.append(prev_p)
    sums.append(acc)
    return PrimePartition(
        limit=limit,
        lambda0=lambda0,
        lambdas=tuple(lambdas),
        block_sums=tuple(sums),
        weight_alpha=weight_alpha,
        index_base=index_base,
    )


def empirical_K(partition: PrimePartition, include_final: bool = False) -> float:
    """Smallest K with 2^(j-K) <= log lambda_j <= 2^(j+K) over the computed
    blocks, i.e. max_j |log2(log lambda_j) - j|.

    The final block is excluded by default: it ends at the sieving limit,
    not at a greedy-maximal prime, so its closing prime is not a true
    lambda_j.
    """
    if partition.nblocks < 3:
        raise RangeError(
            f"need at least 3 blocks to estimate K, got {partition.nblocks}"
        )
    n = partition.nblocks if include_final else partition.ncomplete
    return max(
        abs(math.log2(math.log(lam)) - j)
        for j, lam in zip(partition.indices(), partition.lambdas[:n])
    )


def block_index(p: int, partition: PrimePartition) -> int:
    """The unique block index j with lambda_{j-1} < p <= lambda_j."""
    if p <= partition.lambda0 or p > partition.lambdas[-1]:
        raise RangeError(
            f"p={p} outside partition range ({partition.lambda0}, "
            f"{partition.lambdas[-1]}]"
        )
    return partition.index_base + bisect_left(partition.lambdas, p)
