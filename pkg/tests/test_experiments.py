import math

import pytest

from smoothdigits.digits import nz_count
from smoothdigits.factor import PrimeSet, factorize, is_s_unit
from smoothdigits.experiments import (
    cyclotomic_smooth,
    cyclotomic_value,
    mobius,
    multiplicatively_independent,
    smooth_sparse_search,
    sparse_survey,
    stewart_survey,
    survey_record_dict,
    window_minima,
)


class TestSparseSurvey:
    def test_first_six_base2_k2(self):
        recs = list(sparse_survey(2, 6, k=2))
        assert [r.value for r in recs] == [1, 3, 5, 9, 17, 33]
        assert [r.P for r in recs] == [1, 3, 5, 3, 17, 11]
        assert [r.j for r in recs] == [1, 2, 3, 4, 5, 6]

    def test_k3_includes_seven(self):
        recs = list(sparse_survey(2, 10, k=3))
        by_value = {r.value: r for r in recs}
        assert 7 in by_value
        assert by_value[7].P == 7

    def test_threshold_fields_always_present(self):
        for rec in sparse_survey(2, 40, k=3):
            assert "thm11" in rec.thresholds
            assert "cor15" in rec.thresholds
            if rec.value <= 3814279:
                assert rec.thresholds["thm11"] is None
            else:
                assert isinstance(rec.thresholds["thm11"], float)

    def test_k2_always_archimedean_branch(self):
        for rec in sparse_survey(2, 64, k=2):
            # every member is 1 or 2^m + 1, and two digits force the
            # archimedean branch
            assert rec.value == 1 or rec.value == 2 ** rec.exponents[-1] + 1
            if rec.complete and rec.nz >= 2:
                assert rec.trace_branch == "lambda_a"

    def test_partial_records_survive(self):
        # minuscule budget: large terms stay partial but are still emitted
        recs = list(sparse_survey(2, 80, k=2, factor_budget=1))
        assert len(recs) == 80
        partials = [r for r in recs if not r.complete]
        assert partials, "expected at least one budget-limited record"
        for r in partials:
            assert r.P is None and r.omega is None and r.Q is None
            assert r.cofactor > 1

    def test_determinism(self):
        a = [survey_record_dict(r) for r in sparse_survey(2, 30, k=3)]
        b = [survey_record_dict(r) for r in sparse_survey(2, 30, k=3)]
        assert a == b

    def test_f_mode_has_thm13(self):
        from smoothdigits.sequences import constant_budget

        recs = list(sparse_survey(2, 12, budget_fn=constant_budget(2)))
        assert [r.value for r in recs][:6] == [1, 3, 5, 9, 17, 33]
        for rec in recs:
            assert "thm13" in rec.thresholds

    def test_workers_match_sequential(self):
        seq = [survey_record_dict(r) for r in sparse_survey(2, 12, k=3)]
        par = [survey_record_dict(r) for r in sparse_survey(2, 12, k=3, workers=2)]
        assert seq == par

    def test_window_minima(self):
        recs = list(sparse_survey(2, 10, k=2))
        stats = window_minima(recs)
        assert [s.t for s in stats] == [0, 1, 2, 3]
        assert stats[0].min_P == 1  # the window containing u_1 = 1
        assert stats[1].min_P == 3  # u_2, u_3 = 3, 5
        assert all(s.total >= s.complete for s in stats)


class TestStewart:
    def test_base3_row10(self):
        rows = {r.n: r for r in stewart_survey(2, 3, (3, 12))}
        assert rows[10].nz == 6  # 1024 in base 3 is 1101221
        assert math.isclose(rows[10].bound, 1.3803929967673457, rel_tol=1e-12)
        assert rows[10].exceeds

    def test_dependent_pair_rejected(self):
        with pytest.raises(ValueError):
            list(stewart_survey(2, 2, (3, 5)))
        with pytest.raises(ValueError):
            list(stewart_survey(4, 8, (3, 5)))

    def test_small_n_flagged_not_dropped(self):
        rows = list(stewart_survey(3, 2, (3, 3)))
        assert len(rows) == 1
        row = rows[0]
        assert row.nz == 4  # 27 = 11011
        assert math.isclose(row.bound, 5.840710607083929, rel_tol=1e-12)
        assert row.exceeds is False

    def test_nz_matches_direct_count(self):
        for row in stewart_survey(2, 3, (3, 40)):
            assert row.nz == nz_count(2**row.n, 3)

    def test_independence_check(self):
        assert multiplicatively_independent(2, 3)
        assert not multiplicatively_independent(4, 8)
        assert not multiplicatively_independent(9, 27)
        assert multiplicatively_independent(6, 12)

    def test_range_validation(self):
        with pytest.raises(ValueError):
            list(stewart_survey(2, 3, (2, 10)))  # start below 3
        with pytest.raises(ValueError):
            list(stewart_survey(2, 3, (5, 4)))


class TestCyclotomic:
    def test_construction_n12(self):
        rep = cyclotomic_smooth(12)
        assert rep.parts == ((8, 17), (24, 241))
        assert rep.identity_ok
        assert rep.N == 4097
        assert rep.P == 241
        assert rep.factors == ((17, 1), (241, 1))
        # smallest passing scale: log(241) * logloglog(N) / log(N)
        assert math.isclose(rep.min_c, 0.4949841654392084, rel_tol=1e-9)

    def test_smallest_cases(self):
        assert cyclotomic_smooth(1).parts == ((2, 3),)
        assert cyclotomic_smooth(2).parts == ((4, 5),)

    def test_repeated_prime_across_parts(self):
        rep = cyclotomic_smooth(3)  # parts 3 and 3 multiply to 9
        assert rep.parts == ((2, 3), (6, 3))
        assert rep.identity_ok
        assert rep.factors == ((3, 2),)

    def test_identity_sample(self):
        for n in (5, 17, 30, 64, 100):
            assert cyclotomic_smooth(n).identity_ok

    def test_mobius(self):
        values = [mobius(d) for d in range(1, 11)]
        assert values == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]

    def test_cyclotomic_values(self):
        assert cyclotomic_value(1, 2) == 1
        assert cyclotomic_value(2, 2) == 3
        assert cyclotomic_value(8, 2) == 17
        assert cyclotomic_value(24, 2) == 241
        assert cyclotomic_value(12, 2) == 13


class TestSmoothSparseSearch:
    def test_base10_hits(self):
        hits = smooth_sparse_search(10, 2, [2, 3, 5], 100)
        values = [h.value for h in hits]
        expected = [
            n
            for n in range(1, 101)
            if is_s_unit(n, PrimeSet((2, 3, 5)))
            and n % 10 != 0
            and nz_count(n, 10) <= 2
        ]
        assert values == expected
        assert set(range(1, 10)) - {7} - set(values) == set()  # 1..6, 8, 9 present

    def test_powers_of_three_in_binary(self):
        hits = smooth_sparse_search(2, 2, [3], 10**6)
        assert [h.value for h in hits] == [1, 3, 9]

    def test_limit_one(self):
        hits = smooth_sparse_search(7, 3, [2, 3], 1)
        assert [h.value for h in hits] == [1]

    def test_hits_recheck(self):
        s = PrimeSet((2, 3, 7))
        for h in smooth_sparse_search(10, 2, s, 5000):
            assert is_s_unit(h.value, s)
            assert nz_count(h.value, 10) <= 2
            assert h.value % 10 != 0

    def test_scarcity(self):
        hits = smooth_sparse_search(2, 2, [11], 10**4)
        # 11 = 1011 and 121 = 1111001 both carry too many ones: only 1 stays
        assert [h.value for h in hits] == [1]
