"""Exact-rational verification of the combinatorial layer.

Everything here runs in fractions.Fraction arithmetic; no floats. The
objects are composition vectors b = (b_M, ..., b_J) of prime-factor counts,
the dyadic weight f(b), the cycle lemma and its cyclic product-sum identity,
Abel's binomial identity, its constrained-sum bound, and the closed-form
composition sum equal to k^{k-1}/k!.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import RangeError, ResourceLimitError

S_ZERO_K_MAX = 8
CYCLE_R_MAX = 16

# Rational stand-in for e^4 = 54.598... in the constrained-sum bound; using
# 55 keeps the comparison exact and the certificate valid (55 > e^4).
E4_BOUND = Fraction(55)


@dataclass(frozen=True)
class CompositionVec:
    """Counts b_M, ..., b_J of prime factors per block, with k = sum(b)."""

    M: int
    b: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.M < 1:
            raise RangeError(f"M must be >= 1, got {self.M}")
        if any(x < 0 for x in self.b):
            raise RangeError("composition entries must be nonnegative")

    @property
    def J(self) -> int:
        return self.M + len(self.b) - 1

    @property
    def k(self) -> int:
        return sum(self.b)


def _pow2(e: int) -> Fraction:
    return Fraction(2**e) if e >= 0 else Fraction(1, 2**-e)


def f_of_b(cv: CompositionVec) -> Fraction:
    """f(b) = sum over h of 2^(M-1-h + b_M+...+b_h), exactly."""
    total = Fraction(0)
    prefix = 0
    for offset, bh in enumerate(cv.b):
        h = cv.M + offset
        prefix += bh
        total += _pow2(cv.M - 1 - h + prefix)
    return total


def cycle_rotation(z) -> int:
    """Smallest 1-based index i minimizing z_1 + ... + z_i.

    The rotation (z_{i+1}, ..., z_k, z_1, ..., z_i) then has every prefix
    sum >= 0; this is verified before returning. Input must sum to zero
    (exactly for int/Fraction entries, to 1e-12 for floats).
    """
    z = list(z)
    if not z:
        raise RangeError("need a nonempty vector")
    exact = all(isinstance(x, (int, Fraction)) for x in z)
    total = sum(z) if exact else math.fsum(z)
    tol = 0 if exact else 1e-12
    if abs(total) > tol:
        raise RangeError(f"entries must sum to zero, got {total}")
    best_i = 1
    best = run = z[0]
    for i, x in enumerate(z[1:], start=2):
        run = run + x
        if run < best:
            best, best_i = run, i
    rotated = z[best_i:] + z[:best_i]
    run = 0
    for x in rotated:
        run = run + x
        if run < -tol:
            raise AssertionError("rotation has a negative prefix sum")
    return best_i


@dataclass(frozen=True)
class CycleSumResult:
    value: Fraction
    lo: Fraction
    hi: Fraction

    @property
    def holds(self) -> bool:
        return self.lo <= self.value <= self.hi


def cycle_sum_check(x) -> CycleSumResult:
    """Exact evaluation of sum over rotations j of
    1 / (x_{1+j} + x_{1+j} x_{2+j} + ... + x_{1+j}...x_{r+j}),
    together with the bracket [1/max(1,X), 1/min(1,X)], X = prod x_i.
    The value equals 1 exactly whenever X = 1."""
    xs = [Fraction(v) for v in x]
    r = len(xs)
    if r == 0 or r > CYCLE_R_MAX:
        raise RangeError(f"need 1 <= r <= {CYCLE_R_MAX}, got {r}")
    if any(v <= 0 for v in xs):
        raise RangeError("entries must be positive")
    X = math.prod(xs)
    total = Fraction(0)
    for j in range(r):
        prod = Fraction(1)
        inner = Fraction(0)
        for h in range(r):
            prod *= xs[(j + h) % r]
            inner += prod
        total += 1 / inner
    return CycleSumResult(
        value=total, lo=1 / max(Fraction(1), X), hi=1 / min(Fraction(1), X)
    )


def _rpow(base: Fraction, e: int) -> Fraction:
    """base**e for possibly negative integer e; base must be nonzero."""
    return base**e if e >= 0 else (Fraction(1) / base) ** (-e)


@dataclass(frozen=True)
class IdentityResult:
    lhs: Fraction
    rhs: Fraction

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def abel_identity(t: int, a, b) -> IdentityResult:
    """Abel's binomial identity, both sides exact:
    sum_j C(t,j) (a+j)^{j-1} (b+t-j)^{t-j-1} = (1/a + 1/b)(t+a+b)^{t-1}."""
    if t < 1:
        raise RangeError(f"t must be >= 1, got {t}")
    a, b = Fraction(a), Fraction(b)
    if a <= 0 or b <= 0:
        raise RangeError("a and b must be positive")
    lhs = Fraction(0)
    for j in range(t + 1):
        lhs += math.comb(t, j) * _rpow(a + j, j - 1) * _rpow(b + t - j, t - j - 1)
    rhs = (1 / a + 1 / b) * _rpow(a + b + t, t - 1)
    return IdentityResult(lhs=lhs, rhs=rhs)


@dataclass(frozen=True)
class BoundResult:
    lhs: Fraction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.bound


def combsum_check(t: int, a, b) -> BoundResult:
    """Constrained Abel-type sum against its 55 (t+a+b)^{t-1} bound:
    sum over 1 <= j <= t-1 with j+a > 0 of C(t,j)(a+j)^{j-1}(b+t-j)^{t-j-1}."""
    if t < 2:
        raise RangeError(f"t must be >= 2, got {t}")
    a, b = Fraction(a), Fraction(b)
    if b < 0:
        raise RangeError(f"b must be >= 0, got {b}")
    if a + b + t <= 0:
        raise RangeError("need t + a + b > 0")
    lhs = Fraction(0)
    for j in range(1, t):
        if a + j <= 0:
            continue
        lhs += math.comb(t, j) * _rpow(a + j, j - 1) * _rpow(b + t - j, t - j - 1)
    bound = E4_BOUND * _rpow(a + b + t, t - 1)
    return BoundResult(lhs=lhs, bound=bound)


def compositions(k: int, parts: int):
    """All tuples of `parts` nonnegative integers summing to k, in
    colexicographic order of the bar positions."""
    for bars in combinations(range(k + parts - 1), parts - 1):
        prev = -1
        out = []
        for pos in bars:
            out.append(pos - prev - 1)
            prev = pos
        out.append(k + parts - 2 - prev)
        yield tuple(out)


@dataclass(frozen=True)
class SZeroResult:
    total: Fraction
    target: Fraction

    @property
    def equal(self) -> bool:
        return self.total == self.target


def s_zero_sum(k: int, M: int = 1) -> SZeroResult:
    """Exact check of sum over compositions b of k into k slots (J = M+k-1)
    of 1/(b_M! ... b_J! f(b)) against k^{k-1}/k!; the value is independent
    of M because f(b) depends on b only through its offsets."""
    if k < 1:
        raise RangeError(f"k must be >= 1, got {k}")
    if k > S_ZERO_K_MAX:
        raise ResourceLimitError(f"k <= {S_ZERO_K_MAX} supported, got {k}")
    if M < 1:
        raise RangeError(f"M must be >= 1, got {M}")
    total = Fraction(0)
    for b in compositions(k, k):
        cv = CompositionVec(M=M, b=b)
        denom = Fraction(1)
        for bh in b:
            denom *= math.factorial(bh)
        total += 1 / (denom * f_of_b(cv))
    return SZeroResult(total=total, target=Fraction(k ** (k - 1), math.factorial(k)))
