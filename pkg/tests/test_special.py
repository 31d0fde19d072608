import numpy as np
import pytest
import scipy.special
import scipy.stats

from eegbench import special


class TestIncompleteBeta:
    def test_endpoints(self):
        assert special.regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0
        assert special.regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0

    def test_against_scipy_grid(self):
        rng = np.random.default_rng(1)
        worst = 0.0
        for _ in range(500):
            a = 10 ** rng.uniform(-1.5, 3)
            b = 10 ** rng.uniform(-1.5, 3)
            x = rng.uniform(0, 1)
            got = special.regularized_incomplete_beta(a, b, x)
            worst = max(worst, abs(got - scipy.special.betainc(a, b, x)))
        assert worst < 1e-10

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            special.regularized_incomplete_beta(0.0, 1.0, 0.5)


class TestFSurvival:
    def test_against_scipy(self):
        cases = [(60.10, 6, 1715), (190.23, 4, 1715), (48.56, 24, 1715),
                 (2.2, 3, 10), (0.5, 2, 8), (5.0, 1, 1)]
        for f, d1, d2 in cases:
            assert special.f_survival(f, d1, d2) == pytest.approx(
                scipy.stats.f.sf(f, d1, d2), abs=1e-12)

    def test_degenerate_inputs(self):
        assert special.f_survival(0.0, 3, 10) == 1.0
        assert np.isnan(special.f_survival(float("nan"), 3, 10))


# published upper-5% studentized range quantiles q(0.95; m, df)
PUBLISHED_Q95 = {
    (2, 10): 3.151, (2, 30): 2.888, (2, np.inf): 2.772,
    (3, 10): 3.877, (3, 30): 3.486, (3, np.inf): 3.314,
    (5, 10): 4.654, (5, 30): 4.102, (5, np.inf): 3.858,
}


class TestStudentizedRange:
    def test_zero_and_large_q(self):
        assert special.studentized_range_cdf(0.0, 3, 10) == 0.0
        assert special.studentized_range_cdf(-1.0, 3, 10) == 0.0
        assert special.studentized_range_cdf(100.0, 4, 25) >= 1 - 1e-6

    @pytest.mark.parametrize("key", sorted(PUBLISHED_Q95, key=str))
    def test_published_quantile_tables(self, key):
        m, df = key
        p = special.studentized_range_cdf(PUBLISHED_Q95[key], m, df)
        assert p == pytest.approx(0.95, abs=5e-3)

    def test_large_df_limit_value(self):
        # q(0.95, 3, inf) from the normal-range limit
        assert special.studentized_range_cdf(3.314, 3, float("inf")) == pytest.approx(
            0.95, abs=5e-4)

    def test_monotone_in_q(self):
        qs = np.linspace(0.1, 8.0, 25)
        vals = [special.studentized_range_cdf(q, 4, 12) for q in qs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_against_scipy_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            m = int(rng.integers(2, 9))
            df = float(rng.integers(2, 500))
            q = float(rng.uniform(0.3, 7.0))
            mine = special.studentized_range_cdf(q, m, df)
            ref = scipy.stats.studentized_range.cdf(q, m, df)
            assert mine == pytest.approx(ref, abs=1e-6)

    def test_quantile_round_trip(self):
        for p in (0.5, 0.95, 0.99):
            q = special.studentized_range_quantile(p, 5, 40)
            assert special.studentized_range_cdf(q, 5, 40) == pytest.approx(p, abs=1e-5)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            special.studentized_range_cdf(2.0, 1, 10)
        with pytest.raises(ValueError):
            special.studentized_range_cdf(2.0, 3, 0.5)
        with pytest.raises(ValueError):
            special.studentized_range_quantile(1.2, 3, 10)
