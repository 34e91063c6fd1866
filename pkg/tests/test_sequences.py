import math
from itertools import islice

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothdigits.digits import nz_count, decompose
from smoothdigits.factor import PrimeSet, is_s_unit
from smoothdigits.sequences import (
    PowerSumSpec,
    SparseSpec,
    constant_budget,
    loglog_budget,
    parse_budget_spec,
    power_sum_sequence,
    smooth_sequence,
    sparse_sequence,
    sparse_sequence_f,
    sqrt_budget,
    take,
)


def brute_force_sparse(base, k, limit):
    return [
        n
        for n in range(1, limit + 1)
        if n % base != 0 and nz_count(n, base) <= k
    ]


class TestSparseSequence:
    def test_first_terms_base2(self):
        assert take(sparse_sequence(2, 2), 6) == [1, 3, 5, 9, 17, 33]

    def test_tenth_term_base10(self):
        assert take(sparse_sequence(10, 2), 10)[-1] == 11

    def test_multiples_of_base_absent(self):
        assert 10 not in take(sparse_sequence(2, 2), 50)
        assert all(v % 10 != 0 for v in take(sparse_sequence(10, 3), 500))

    @pytest.mark.parametrize("base,k", [(2, 2), (2, 3), (3, 2), (3, 4), (10, 2)])
    def test_matches_brute_force(self, base, k):
        limit = 3000
        expected = brute_force_sparse(base, k, limit)
        got = list(sparse_sequence(base, k, max_value=limit))
        assert got == expected

    def test_strictly_increasing_no_duplicates(self):
        terms = take(sparse_sequence(3, 3), 2000)
        assert all(a < b for a, b in zip(terms, terms[1:]))

    def test_round_order(self):
        # values with larger top exponent always come later
        terms = take(sparse_sequence(2, 4), 500)
        tops = [decompose(t, 2).top_exponent for t in terms]
        assert tops == sorted(tops)

    def test_validation(self):
        with pytest.raises(ValueError):
            next(sparse_sequence(1, 2))
        with pytest.raises(ValueError):
            next(sparse_sequence(2, 1))


class TestSparseSequenceF:
    def test_constant_reduces_to_fixed_k(self):
        f = constant_budget(2)
        assert take(sparse_sequence_f(2, f), 6) == [1, 3, 5, 9, 17, 33]

    def test_finite_tail_terminates(self):
        # budget 1 in base 10: only 1..9 qualify; everything later in any
        # round is divisible by 10 or has two nonzero digits
        f = constant_budget(1)
        got = list(sparse_sequence_f(10, f, max_value=10**6))
        assert got == list(range(1, 10))

    def test_membership_respects_f_at_the_value(self):
        f = loglog_budget(1.0)
        got = list(sparse_sequence_f(2, f, max_value=100000))
        for n in got:
            assert nz_count(n, 2) <= f(n)
        # and nothing valid was skipped
        expected = [
            n
            for n in range(1, 100001)
            if n % 2 and nz_count(n, 2) <= f(n)
        ]
        assert got == expected

    def test_non_monotone_requires_cap(self):
        with pytest.raises(ValueError):
            next(sparse_sequence_f(2, lambda n: 2.0, f_monotone=False))
        got = list(
            sparse_sequence_f(
                2, lambda n: 2.0, f_monotone=False, digit_cap=2, max_value=40
            )
        )
        assert got == [1, 3, 5, 9, 17, 33]


class TestBudgetFamilies:
    def test_parse(self):
        assert parse_budget_spec("const:3")(100) == 3.0
        assert parse_budget_spec("loglog:2").delta0 is None
        assert parse_budget_spec("sqrtll:0.5").delta0 == 1.0
        with pytest.raises(ValueError):
            parse_budget_spec("nope:1")

    def test_budgets_at_least_one(self):
        for spec in ("const:1", "loglog:0.1", "sqrtll:0.01"):
            f = parse_budget_spec(spec)
            for n in (1, 2, 10, 10**6, 10**9):
                assert f(n) >= 1.0

    def test_sqrt_budget_grows(self):
        f = sqrt_budget(1.0)
        assert f(10**9) > 1.0


class TestPowerSum:
    def test_first_terms(self):
        spec = PowerSumSpec(bases=(2, 2))
        assert take(power_sum_sequence(spec), 4) == [5, 7, 9, 11]

    def test_smallest_term(self):
        spec = PowerSumSpec(bases=(2, 4))
        assert take(power_sum_sequence(spec), 1) == [7]

    def test_deduplication(self):
        spec = PowerSumSpec(bases=(2, 2))
        terms = take(power_sum_sequence(spec), 50)
        assert len(terms) == len(set(terms))
        assert 11 in terms  # 2^1+2^3+1 == 2^3+2^1+1, emitted once

    def test_shared_divisor_checked(self):
        with pytest.raises(ValueError):
            PowerSumSpec(bases=(2, 3))
        PowerSumSpec(bases=(2, 3), shared_divisor_check=False)

    def test_residue_invariant(self):
        spec = PowerSumSpec(bases=(6, 10, 14))
        g = math.gcd(6, 10, 14)
        for v in take(power_sum_sequence(spec), 200):
            assert v % g == 1

    def test_strictly_increasing(self):
        spec = PowerSumSpec(bases=(3, 9))
        terms = take(power_sum_sequence(spec), 500)
        assert all(a < b for a, b in zip(terms, terms[1:]))

    def test_brute_force_agreement(self):
        spec = PowerSumSpec(bases=(2, 6))
        got = list(power_sum_sequence(spec, max_value=5000))
        expected = sorted(
            {
                2**i + 6**j + 1
                for i in range(1, 14)
                for j in range(1, 6)
                if 2**i + 6**j + 1 <= 5000
            }
        )
        assert got == expected


class TestSmoothSequence:
    def test_classic_example(self):
        assert list(smooth_sequence([2, 3, 5], 12)) == [1, 2, 3, 4, 5, 6, 8, 9, 10, 12]

    def test_powers_of_two(self):
        assert list(smooth_sequence([2], 16)) == [1, 2, 4, 8, 16]

    def test_odd_primes(self):
        assert list(smooth_sequence([3, 5], 15)) == [1, 3, 5, 9, 15]

    def test_brute_force_agreement(self):
        s = PrimeSet((2, 3, 5))
        got = list(smooth_sequence(s, 10000))
        expected = [n for n in range(1, 10001) if is_s_unit(n, s)]
        assert got == expected

    def test_all_emissions_are_s_units(self):
        s = PrimeSet((2, 7))
        for v in smooth_sequence(s, 5000):
            assert is_s_unit(v, s)

    @given(limit=st.integers(min_value=1, max_value=2000))
    @settings(max_examples=30, deadline=None)
    def test_monotone_unique(self, limit):
        terms = list(smooth_sequence([2, 3], limit))
        assert all(a < b for a, b in zip(terms, terms[1:]))
        assert terms[0] == 1


class TestLongStreams:
    """Monotone and duplicate-free over the first 1e4 emissions."""

    def test_sparse_long(self):
        terms = take(sparse_sequence(2, 4), 10**4)
        assert len(terms) == 10**4
        assert all(a < b for a, b in zip(terms, terms[1:]))

    def test_power_sum_long(self):
        spec = PowerSumSpec(bases=(2, 2))
        terms = take(power_sum_sequence(spec), 10**4)
        assert len(terms) == 10**4
        assert all(a < b for a, b in zip(terms, terms[1:]))

    def test_smooth_long(self):
        terms = take(smooth_sequence([2, 3, 5], 10**19), 10**4)
        assert len(terms) == 10**4
        assert all(a < b for a, b in zip(terms, terms[1:]))


class TestSparseSpec:
    def test_stream_dispatch(self):
        spec = SparseSpec(base=2, k=2)
        assert take(spec.stream(), 3) == [1, 3, 5]
        spec_f = SparseSpec(base=2, budget=constant_budget(2))
        assert take(spec_f.stream(), 3) == [1, 3, 5]

    def test_validation(self):
        with pytest.raises(ValueError):
            SparseSpec(base=2)
        with pytest.raises(ValueError):
            SparseSpec(base=2, k=2, budget=constant_budget(2))
        with pytest.raises(ValueError):
            SparseSpec(base=2, k=1)
