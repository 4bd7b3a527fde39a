import json
import math
import random

import pytest

from metaplectic.betamedian import median
from metaplectic.metgroup import HalfInt
from metaplectic.nonvanishing import (INCONCLUSIVE, NONVANISHING, VANISHES,
                                      certify, l1_margin_at, r_window,
                                      threshold_N, threshold_bounds,
                                      threshold_close, verify_grid)
from metaplectic.quadrature import BetaParams


class TestThresholdClosedForms:
    def test_diagonal_family_is_4_sqrt_2(self):
        for k in range(0, 51, 5):
            assert abs(threshold_N(k, HalfInt(2 * k + 8))
                       - 4 * math.sqrt(2)) <= 1e-9

    def test_k_zero_family(self):
        for twice_m in (5, 6, 7, 9, 12, 41):
            m = twice_m / 2
            closed = (4.0 * 2.0 ** (1 / (m - 2))
                      * math.sqrt(4.0 ** (1 / (m - 2)) - 1.0))
            assert abs(threshold_N(0, HalfInt(twice_m)) - closed) <= 1e-9

    def test_m_four_family(self):
        for k in (0, 1, 4, 17, 50):
            closed = 4.0 / (2.0 ** (1 / (k + 2)) - 2.0 ** (-1 / (k + 2)))
            assert abs(threshold_N(k, HalfInt(8)) - closed) <= 1e-9

    def test_monotonicity(self):
        assert threshold_N(3, 10) < threshold_N(4, 10)
        assert threshold_N(3, 10) > threshold_N(3, 10.5)

    def test_rejects_small_m(self):
        with pytest.raises(ValueError):
            threshold_N(0, HalfInt(4))


class TestThresholdBounds:
    def test_first_case(self):
        q = 3.0 / 8.0
        assert abs(threshold_bounds(1, 10) - 4 * math.sqrt(q * (1 + q))) \
            < 1e-14
        assert threshold_bounds(1, 10) > threshold_N(1, 10)

    def test_second_case(self):
        assert abs(threshold_bounds(10, 5) - 4 * math.sqrt(110)) < 1e-12
        assert threshold_bounds(10, 5) > threshold_N(10, 5)

    def test_boundaries_return_none(self):
        assert threshold_bounds(3, 7) is None     # k = m - 4
        assert threshold_bounds(0, 9.5) is None   # k = 0
        assert threshold_bounds(5, 4) is None     # m = 4
        assert threshold_bounds(2, 2.5) is None   # m - 4 < 0

    def test_strictly_exceeds_threshold_where_defined(self):
        rng = random.Random(14)
        for _ in range(60):
            k = rng.randrange(1, 30)
            twice_m = rng.randrange(9, 80)
            bound = threshold_bounds(k, HalfInt(twice_m))
            if bound is not None:
                assert bound > threshold_N(k, HalfInt(twice_m))


class TestThresholdClose:
    def test_explicit_small_case(self):
        q = 1.3738 / 1.8738
        assert abs(threshold_close(0, 4.5)
                   - 4 * math.sqrt(q * (1 + q))) < 1e-14

    def test_paper_anchor_large(self):
        assert math.ceil(threshold_close(1000, 16970) + 6.204) == 8

    def test_paper_anchor_mid(self):
        assert math.ceil(threshold_close(158, 2702.5) + 0.8018) == 2

    def test_range_validation(self):
        with pytest.raises(ValueError):
            threshold_close(0, 4.0)


class TestWindow:
    def test_empty_below_threshold(self):
        # N_{0,9/2} ~ 4.54
        assert r_window(4, 0, 4.5) is None
        assert r_window(1, 2, 5.5) is None

    def test_nonempty_just_above(self):
        for k, twice_m in [(0, 9), (1, 11), (3, 9)]:
            n_thr = threshold_N(k, HalfInt(twice_m))
            window = r_window(math.floor(n_thr) + 1, k, HalfInt(twice_m))
            assert window is not None
            lo, hi = window
            assert 0.0 < lo < hi
            M = median(BetaParams.from_weight(k, twice_m / 2)).value
            assert abs(math.tanh(lo) ** 2 - M) <= 1e-10

    def test_example_k0_m45_n5(self):
        assert threshold_N(0, 4.5) < 5.0
        assert r_window(5, 0, 4.5) is not None

    def test_equivalence_with_threshold(self):
        rng = random.Random(5)
        for _ in range(200):
            k = rng.randrange(0, 12)
            twice_m = rng.randrange(5, 60)
            N = rng.randrange(1, 14)
            nonempty = r_window(N, k, HalfInt(twice_m)) is not None
            assert nonempty == (N > threshold_N(k, HalfInt(twice_m)))


class TestCertify:
    def test_meets_k_vanishes(self):
        for N, k, twice_m in [(1, 0, 5), (100, 3, 9), (7, 2, 8)]:
            cert = certify(N, k, HalfInt(twice_m), gamma_meets_K=True)
            assert cert.verdict == VANISHES

    def test_sl2_closed_form_case(self):
        cert = certify(6, 0, HalfInt(8))
        assert cert.verdict == NONVANISHING
        assert abs(cert.threshold - 4 * math.sqrt(2)) < 1e-9
        assert cert.r_window is not None and cert.l1_margin > 0

    def test_level_one_large_weight(self):
        cert = certify(1, 0, HalfInt(54))
        assert cert.verdict == NONVANISHING

    def test_inconclusive_below(self):
        cert = certify(4, 0, HalfInt(9))
        assert cert.verdict == INCONCLUSIVE
        assert cert.r_window is None and cert.l1_margin is None

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            certify(0, 0, HalfInt(9))
        with pytest.raises(ValueError):
            certify(3, 0, HalfInt(3))   # genuine m = 3/2 < 5/2
        with pytest.raises(ValueError):
            certify(3, 0, HalfInt(4))   # integer m = 2 < 3

    def test_coherence_on_random_draws(self):
        rng = random.Random(99)
        for _ in range(300):
            k = rng.randrange(0, 9)
            twice_m = rng.randrange(5, 41)
            N = rng.randrange(1, 13)
            if twice_m % 2 == 0 and twice_m < 6:
                continue
            cert = certify(N, k, HalfInt(twice_m))
            window = r_window(N, k, HalfInt(twice_m))
            if cert.verdict == NONVANISHING:
                assert window is not None
                assert cert.l1_margin > 0.0
            else:
                assert cert.verdict == INCONCLUSIVE
                assert window is None or \
                    N <= cert.threshold + 1e-10

    def test_margin_formula_positive_inside_window(self):
        window = r_window(6, 0, HalfInt(8))
        lo, hi = window
        assert l1_margin_at(0, HalfInt(8), 0.5 * (lo + hi)) > 0.0
        # crossing below the lower endpoint flips the sign
        assert l1_margin_at(0, HalfInt(8), 0.9 * lo) < 0.0

    def test_to_dict_round_trips_through_json(self):
        cert = certify(6, 1, HalfInt(9))
        payload = json.loads(json.dumps(cert.to_dict()))
        assert payload["verdict"] == cert.verdict
        assert payload["two_m"] == 9


class TestGrid:
    def test_anchor_rows(self):
        assert math.floor(threshold_N(1000, HalfInt(33940))) + 1 == 1
        assert math.floor(threshold_N(158, HalfInt(5405))) + 1 == 1

    def test_small_grid_clean(self):
        report = verify_grid(5, 30)
        assert report.ok
        assert report.item1_violations == 0
        assert report.item2_violations == 0
        assert report.item3_violations == 0
        assert report.first_violation is None
        assert len(report.rows) == 6 * (2 * 30 - 9 + 1)

    def test_zone_classification_matches_closed_form(self):
        report = verify_grid(0, 30)
        for row in report.rows:
            m = row.two_m / 2
            if m >= 26.4:
                assert row.n_floor_plus_1 == 1
            elif m <= 25.34:
                assert row.n_floor_plus_1 > 1

    def test_csv_columns(self):
        report = verify_grid(1, 6)
        lines = report.to_csv().splitlines()
        assert lines[0] == "k,2m,N_exact,N_floor_plus_1,N_close,item1_ok," \
                           "item2_ok"
        assert len(lines) == 1 + len(report.rows)

    def test_json_summary(self):
        report = verify_grid(1, 6)
        payload = json.loads(report.to_json())
        assert payload["ok"] is True
        assert payload["cells"] == len(report.rows)

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            verify_grid(-1, 30)
        with pytest.raises(ValueError):
            verify_grid(2000, 30)
        with pytest.raises(ValueError):
            verify_grid(5, 4.0)
