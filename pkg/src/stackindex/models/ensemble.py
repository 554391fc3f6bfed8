"""Pointwise-median combination of forecasts from different model families."""

from __future__ import annotations

import numpy as np

from ..errors import MismatchedHorizons, MismatchedLevels, MismatchedOrigins
from .forecast import Forecast, ForecastPoint


def ensemble_forecast(forecasts: list[Forecast]) -> Forecast:
    """Median yhat and median bounds, re-clamped so lower <= yhat <= upper.

    All members must share origin, horizon, and interval level. The median of
    an even member count is the midpoint of the two central values.
    """
    if len(forecasts) < 2:
        raise ValueError("ensemble needs at least two member forecasts")
    first = forecasts[0]
    for f in forecasts[1:]:
        if f.horizon != first.horizon:
            raise MismatchedHorizons(f"horizons differ: {first.horizon} vs {f.horizon}")
        if f.origin != first.origin:
            raise MismatchedOrigins(f"origins differ: {first.origin} vs {f.origin}")
        if f.level != first.level:
            raise MismatchedLevels(f"interval levels differ: {first.level} vs {f.level}")

    yhat = np.median([f.yhat for f in forecasts], axis=0)
    raw = np.median([f.yhat_raw for f in forecasts], axis=0)
    lower = np.minimum(np.median([f.lower for f in forecasts], axis=0), yhat)
    upper = np.maximum(np.median([f.upper for f in forecasts], axis=0), yhat)
    points = tuple(
        ForecastPoint(first.points[i].month, float(yhat[i]), float(lower[i]), float(upper[i]))
        for i in range(first.horizon)
    )
    return Forecast(first.origin, first.horizon, first.level, points,
                    tuple(float(v) for v in raw))
