from __future__ import annotations

import numpy as np
import pytest

from stackindex.dataset import MonthStamp
from stackindex.errors import MismatchedHorizons, MismatchedLevels, MismatchedOrigins
from stackindex.models import build_forecast, ensemble_forecast, forecast_series

from conftest import make_series

ORIGIN = MonthStamp(2015, 12)


def flat_forecast(value: float, horizon: int = 2, level: float = 0.8,
                  width: float = 2.0, origin: MonthStamp = ORIGIN):
    yhat = np.full(horizon, value)
    return build_forecast(origin, level, yhat, np.full(horizon, width))


def test_odd_count_median():
    combined = ensemble_forecast([flat_forecast(10), flat_forecast(20), flat_forecast(30)])
    assert combined.yhat.tolist() == [20.0, 20.0]


def test_even_count_median_is_midpoint():
    combined = ensemble_forecast([flat_forecast(10, horizon=1), flat_forecast(20, horizon=1)])
    assert combined.yhat.tolist() == [15.0]


def test_mismatched_horizons():
    with pytest.raises(MismatchedHorizons):
        ensemble_forecast([flat_forecast(10, horizon=6), flat_forecast(10, horizon=12)])


def test_mismatched_origins():
    with pytest.raises(MismatchedOrigins):
        ensemble_forecast([flat_forecast(10), flat_forecast(10, origin=MonthStamp(2016, 1))])


def test_mismatched_levels():
    with pytest.raises(MismatchedLevels):
        ensemble_forecast([flat_forecast(10), flat_forecast(10, level=0.9)])


def test_needs_two_members():
    with pytest.raises(ValueError):
        ensemble_forecast([flat_forecast(10)])


def test_bounds_reclamped_around_median():
    # median bounds can cross the median point forecast; the result must not
    wide = flat_forecast(10, width=0.1)
    narrow = flat_forecast(30, width=0.1)
    combined = ensemble_forecast([wide, narrow])
    for p in combined.points:
        assert p.lower <= p.yhat <= p.upper


def test_ensemble_kind_runs_all_families():
    rng = np.random.default_rng(8)
    y = np.maximum(0.0, 100 + np.arange(60) * 2 + rng.normal(0, 5, 60))
    fc = forecast_series(make_series(y), "ensemble", 6, 0.8)
    assert fc.horizon == 6
    assert np.all(fc.lower <= fc.yhat) and np.all(fc.yhat <= fc.upper)
