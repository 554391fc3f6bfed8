"""Additive triple exponential smoothing with grid-searched smoothing weights.

Recursions (classic component form, one-step forecast first):

    yhat_t = level + trend + seasonal[t mod 12]
    level' = alpha * (y_t - seasonal[t mod 12]) + (1 - alpha) * (level + trend)
    trend' = beta * (level' - level) + (1 - beta) * trend
    seasonal[t mod 12]' = gamma * (y_t - level - trend) + (1 - gamma) * seasonal[t mod 12]

(alpha, beta, gamma) minimize one-step-ahead in-sample SSE over the grid
{0.05, 0.10, ..., 0.95}^3; the grid keeps the fit deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..dataset import MonthStamp, TagSeries
from ..errors import SeriesTooShort
from .forecast import Forecast, build_forecast, check_horizon, check_level, z_quantile

PERIOD = 12
MIN_POINTS = 2 * PERIOD
GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))


@dataclass(frozen=True)
class HoltWintersFit:
    alpha: float
    beta: float
    gamma: float
    level: float
    trend: float
    seasonal: tuple[float, ...]
    residual_sd: float
    n_obs: int
    origin: MonthStamp
    fitted_values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.seasonal) != PERIOD:
            raise ValueError("seasonal indices must have length 12")
        if abs(sum(self.seasonal)) > 1e-6:
            raise ValueError("seasonal indices must sum to 0 after normalization")


def _initial_state(y: np.ndarray) -> tuple[float, float, np.ndarray]:
    first = y[:PERIOD]
    second = y[PERIOD:2 * PERIOD]
    level = float(np.mean(first))
    trend = float((np.mean(second) - np.mean(first)) / PERIOD)
    seasonal = first - np.mean(first)
    seasonal = seasonal - np.mean(seasonal)
    return level, trend, seasonal


def _grid_sse(y: np.ndarray) -> tuple[float, float, float]:
    """Vectorized one-step SSE over the full (alpha, beta, gamma) grid."""
    a, b, g = np.meshgrid(GRID, GRID, GRID, indexing="ij")
    a, b, g = a.ravel(), b.ravel(), g.ravel()
    k = a.size
    level0, trend0, seasonal0 = _initial_state(y)
    level = np.full(k, level0)
    trend = np.full(k, trend0)
    seasonal = np.tile(seasonal0, (k, 1))
    sse = np.zeros(k)
    for t, y_t in enumerate(y):
        j = t % PERIOD
        s_j = seasonal[:, j]
        err = y_t - (level + trend + s_j)
        sse += err * err
        prev = level + trend
        new_level = a * (y_t - s_j) + (1.0 - a) * prev
        trend = b * (new_level - level) + (1.0 - b) * trend
        seasonal[:, j] = g * (y_t - prev) + (1.0 - g) * s_j
        level = new_level
    best = int(np.argmin(sse))
    return float(a[best]), float(b[best]), float(g[best])


def _run(y: np.ndarray, alpha: float, beta: float, gamma: float):
    level, trend, seasonal = _initial_state(y)
    seasonal = seasonal.copy()
    fitted = np.empty_like(y)
    for t, y_t in enumerate(y):
        j = t % PERIOD
        fitted[t] = level + trend + seasonal[j]
        prev = level + trend
        new_level = alpha * (y_t - seasonal[j]) + (1.0 - alpha) * prev
        trend = beta * (new_level - level) + (1.0 - beta) * trend
        seasonal[j] = gamma * (y_t - prev) + (1.0 - gamma) * seasonal[j]
        level = new_level
    return level, trend, seasonal, fitted


def fit_holt_winters(series: TagSeries) -> HoltWintersFit:
    """Fit by exhaustive grid search over the smoothing weights.

    Initialization: level = mean of the first year, trend = year-over-year
    mean difference / 12, seasonal = first-year deviations normalized to
    sum 0. Requires two full seasonal cycles.
    """
    n = len(series)
    if n < MIN_POINTS:
        raise SeriesTooShort(f"holt-winters needs >= {MIN_POINTS} points, got {n}")
    y = series.values
    alpha, beta, gamma = _grid_sse(y)
    level, trend, seasonal, fitted = _run(y, alpha, beta, gamma)
    residuals = y - fitted
    residual_sd = float(np.sqrt(np.mean(residuals**2)))
    # Fold the seasonal mean into the level so the indices sum to zero
    # without changing any forecast.
    shift = float(np.mean(seasonal))
    seasonal = seasonal - shift
    level = level + shift
    return HoltWintersFit(
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        level=level,
        trend=trend,
        seasonal=tuple(float(s) for s in seasonal),
        residual_sd=residual_sd,
        n_obs=n,
        origin=series.end,
        fitted_values=fitted,
    )


def predict_holt_winters(fit: HoltWintersFit, horizon: int, level: float = 0.8) -> Forecast:
    check_horizon(horizon)
    check_level(level)
    steps = np.arange(1, horizon + 1)
    seasonal = np.array([fit.seasonal[(fit.n_obs + h - 1) % PERIOD] for h in steps])
    yhat = fit.level + steps * fit.trend + seasonal
    half = np.full(horizon, z_quantile(level) * fit.residual_sd)
    return build_forecast(fit.origin, level, yhat, half)
