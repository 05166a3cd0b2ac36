import math
import random

import pytest

from divlab.cluster import (
    LOG2,
    IntervalUnion,
    aggregate_LW,
    cluster_set,
    lemmaL_check,
    subsetsum_measure,
    trunc_S,
    trunc_T,
)
from divlab.errors import RangeError, ResourceLimitError
from divlab.factor import factorize, sieve_primes


@pytest.fixture(scope="module")
def table():
    return sieve_primes(10**5)


def fz(n, table):
    return factorize(n, table)


class TestClusterSet:
    def test_a1(self, table):
        st = cluster_set(fz(1, table))
        assert st.L == pytest.approx(LOG2, abs=0)
        assert st.W == 1 and st.tau == 1

    def test_a6(self, table):
        st = cluster_set(fz(6, table))
        assert st.L == pytest.approx(LOG2 + math.log(6), rel=1e-14)
        assert st.W == 10

    def test_a4_abutting_intervals_merge(self, table):
        st = cluster_set(fz(4, table))
        assert st.L == pytest.approx(3 * LOG2, rel=1e-14)
        assert len(st.union.intervals) == 1

    def test_a2_ratio_exactly_two_counts(self, table):
        assert cluster_set(fz(2, table)).W == 4

    def test_prime_gives_extremes(self, table):
        st = cluster_set(fz(31, table))
        assert st.W == st.tau == 2  # only the diagonal pairs
        assert st.L == pytest.approx(2 * LOG2, rel=1e-14)

    def test_W_bounds_and_L_bounds(self, table):
        rng = random.Random(99)
        for a in [rng.randrange(1, 10**5) for _ in range(150)]:
            st = cluster_set(fz(a, table))
            assert st.tau <= st.W <= st.tau**2
            assert LOG2 - 1e-12 <= st.L
            assert st.L <= min(st.tau * LOG2, LOG2 + math.log(a)) + 1e-9


class TestIntervalUnion:
    def test_invariants(self):
        u = IntervalUnion.from_left_intervals([0.0, 0.5, 3.0], 1.0)
        assert u.intervals == ((-1.0, 0.5), (2.0, 3.0))
        assert u.measure == pytest.approx(2.5, abs=1e-15)

    def test_touching_merge(self):
        u = IntervalUnion.from_left_intervals([0.0, 1.0], 1.0)
        assert len(u.intervals) == 1
        assert u.measure == pytest.approx(2.0, abs=1e-15)


class TestSubsetSum:
    def test_empty(self):
        assert subsetsum_measure([], LOG2) == pytest.approx(LOG2, abs=0)

    def test_disjoint(self):
        assert subsetsum_measure([math.log(3)], LOG2) == pytest.approx(2 * LOG2, rel=1e-14)

    def test_abutting(self):
        assert subsetsum_measure([math.log(2)], LOG2) == pytest.approx(2 * LOG2, rel=1e-14)

    def test_reproduces_L_for_squarefree(self, table):
        rng = random.Random(17)
        count = 0
        for a in range(2, 3000):
            f = fz(a, table)
            if f.mu_squared != 1 or rng.random() > 0.05:
                continue
            xs = [math.log(p) for p, _ in f.factors]
            assert subsetsum_measure(xs, LOG2) == pytest.approx(
                cluster_set(f).L, rel=1e-12
            )
            count += 1
        assert count > 20

    def test_remark_upper_bound(self):
        # measure <= min_j 2^{k-j} (x_1+...+x_j + eta) for ascending xs
        rng = random.Random(4)
        for _ in range(40):
            xs = sorted(rng.uniform(0.01, 2.0) for _ in range(rng.randrange(0, 8)))
            eta = rng.uniform(0.05, 1.0)
            m = subsetsum_measure(xs, eta)
            k = len(xs)
            bound = min(
                2 ** (k - j) * (sum(xs[:j]) + eta) for j in range(k + 1)
            )
            assert m <= bound + 1e-9

    def test_budget(self):
        with pytest.raises(ResourceLimitError):
            subsetsum_measure([0.1] * 25, 0.5)


class TestLemmaL:
    def test_equality_cases(self, table):
        r = lemmaL_check(fz(4, table))
        assert abs(r.margin_i) < 1e-12 and r.margin_prefix is None
        r = lemmaL_check(fz(1, table))
        assert abs(r.margin_i) < 1e-12 and abs(r.margin_prefix) < 1e-12

    def test_a30(self, table):
        r = lemmaL_check(fz(30, table))
        assert r.holds
        assert r.margin_i >= -1e-9 and r.margin_prefix >= -1e-9

    def test_squarefree_sweep(self, table):
        for a in range(1, 3000):
            f = fz(a, table)
            if f.mu_squared == 1:
                assert lemmaL_check(f).holds, a

    def test_part_ii_random_coprime_pairs(self, table):
        rng = random.Random(12)
        done = 0
        while done < 50:
            a, b = rng.randrange(1, 2000), rng.randrange(1, 2000)
            if math.gcd(a, b) != 1:
                continue
            fa, fb, fab = fz(a, table), fz(b, table), fz(a * b, table)
            assert cluster_set(fab).L <= fb.tau * cluster_set(fa).L + 1e-9
            done += 1


class TestAggregateLW:
    def test_singletons(self):
        r1 = aggregate_LW({1})
        assert (r1.sum_L, r1.sum_tau, r1.sum_W) == pytest.approx((LOG2, 1.0, 1.0))
        assert r1.holds  # log 2 >= 1/6
        r2 = aggregate_LW({2})
        assert (r2.sum_L, r2.sum_tau, r2.sum_W) == pytest.approx((LOG2, 1.0, 2.0))
        assert r2.holds

    def test_random_subsets(self, table):
        rng = random.Random(31)
        for _ in range(25):
            size = rng.randrange(1, 60)
            A = {rng.randrange(1, 10**4) for _ in range(size)}
            assert aggregate_LW(A, table).holds

    def test_empty_error(self):
        with pytest.raises(RangeError):
            aggregate_LW(set())


class TestTruncT:
    def test_seven_term_sum(self, table):
        # independent recomputation through subsetsum_measure
        expect = 0.0
        for a in (1, 2, 3, 5, 6, 7, 10):
            f = fz(a, table)
            xs = [math.log(p) for p, _ in f.factors]
            expect += subsetsum_measure(xs, LOG2) / a
        got = trunc_T(10, 1, None, 10, table)
        assert got.value == pytest.approx(expect, rel=1e-12)
        assert got.terms == 7

    def test_only_one(self, table):
        assert trunc_T(2, 1, None, 1, table).value == pytest.approx(LOG2, abs=0)

    def test_k_filter_zero(self, table):
        assert trunc_T(10, 1, 0, 10, table).value == pytest.approx(LOG2, abs=0)
        assert trunc_T(10, 2, 0, 10, table).value == 0.0

    def test_monotonicity(self, table):
        base = trunc_T(20, 2, None, 200, table).value
        assert trunc_T(20, 2, None, 400, table).value >= base  # a_max up
        assert trunc_T(23, 2, None, 200, table).value >= base  # P up
        assert trunc_T(20, 3, None, 200, table).value <= base  # Q up

    def test_tail_bound_positive(self, table):
        assert trunc_T(50, 1, None, 100, table).tail_bound > 0


class TestTruncS:
    def test_floor_term(self, table):
        assert trunc_S(100.0, 1, table) == pytest.approx(
            LOG2 / math.log(100) ** 2, rel=1e-14
        )

    def test_finite_and_above_floor(self, table):
        v = trunc_S(100.0, 10, table)
        assert v >= LOG2 / math.log(100) ** 2

    def test_monotone_in_a_max(self, table):
        vals = [trunc_S(64.0, m, table) for m in (1, 4, 16, 64)]
        assert vals == sorted(vals)

    def test_precondition(self, table):
        with pytest.raises(RangeError):
            trunc_S(8.0, 10, table)
