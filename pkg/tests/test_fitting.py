import numpy as np
import pytest

from scoreline.fitting import (
    fit_trig_series,
    monotone_cubic_eval,
    monotone_cubic_slopes,
)


class TestMonotoneCubic:
    def test_reproduces_linear_data_exactly(self):
        x = np.arange(0, 101, 5, dtype=float)
        y = 7.0 * (100 - x) + 1
        q = np.arange(0, 101, dtype=float)
        out = monotone_cubic_eval(x, y, q)
        assert np.allclose(out, 7.0 * (100 - q) + 1, atol=1e-9)

    def test_exact_at_knots(self):
        x = np.array([0.0, 5, 10, 15, 20])
        y = np.array([100.0, 60, 35, 20, 10])
        out = monotone_cubic_eval(x, y, x)
        assert np.allclose(out, y, atol=1e-12)

    def test_monotone_between_knots(self):
        x = np.arange(0, 51, 5, dtype=float)
        y = np.array([1000.0, 700, 450, 300, 180, 110, 60, 30, 12, 4, 1])
        q = np.linspace(0, 50, 501)
        out = monotone_cubic_eval(x, y, q)
        assert np.all(np.diff(out) <= 1e-9)

    def test_no_overshoot_on_step_like_data(self):
        x = np.array([0.0, 1, 2, 3])
        y = np.array([10.0, 10, 0, 0])
        q = np.linspace(0, 3, 301)
        out = monotone_cubic_eval(x, y, q)
        assert out.max() <= 10 + 1e-9
        assert out.min() >= -1e-9

    def test_rejects_degenerate_knots(self):
        with pytest.raises(ValueError):
            monotone_cubic_slopes([1.0], [2.0])
        with pytest.raises(ValueError):
            monotone_cubic_slopes([1.0, 1.0], [2.0, 3.0])


class TestTrigSeries:
    def test_fits_smooth_curve_tightly(self):
        x = np.arange(0, 41, dtype=float)
        y = 2000.0 * ((40 - x) / 40) ** 2 + 1
        fit = fit_trig_series(x, y, order=3)
        assert fit.rms_residual < 1.0
        assert np.abs(y - fit(x)).max() < 3.0

    def test_recovers_its_own_model(self):
        x = np.linspace(0, 60, 80)
        omega = np.pi / 60
        y = 5 + 3 * np.cos(omega * (x - 30)) + 2 * np.sin(omega * (x - 30))
        fit = fit_trig_series(x, y, order=1)
        assert fit.rms_residual < 1e-6

    def test_order_zero_is_the_mean(self):
        fit = fit_trig_series([1.0, 2, 3], [10.0, 20, 30], order=0)
        assert fit.coeffs == (20.0,)
        assert fit(np.array([5.0]))[0] == 20.0

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError, match="needs"):
            fit_trig_series([1.0, 2, 3], [1.0, 2, 3], order=3)

    def test_constant_abscissa_degrades_to_mean(self):
        fit = fit_trig_series([5.0] * 10, np.arange(10.0), order=3)
        assert fit.order == 0
        assert fit.coeffs == (4.5,)

    def test_duplicate_abscissae_are_fine(self):
        # amended tables can map two scores onto one point
        x = np.array([0.0, 1, 1, 2, 3, 4, 5, 6, 7, 8])
        y = np.array([9.0, 8, 7, 6, 5, 4, 3, 2, 1, 0])
        fit = fit_trig_series(x, y, order=2)
        assert np.isfinite(fit.rms_residual)
