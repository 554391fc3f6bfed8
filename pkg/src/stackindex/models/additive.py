"""Decomposable model: piecewise-linear trend plus Fourier seasonality.

The fit is a single ridge-regularized least-squares solve over the design
matrix ``[1, t, max(0, t - c_j)..., cos/sin Fourier columns...]``. Only the
changepoint-delta columns are penalized, so with no changepoints and no
Fourier terms the fit reduces to an ordinary least-squares line.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..dataset import MonthStamp, TagSeries
from ..errors import SeriesTooShort, SingularDesign
from .forecast import Forecast, build_forecast, check_horizon, check_level, z_quantile

MIN_POINTS = 24


@dataclass(frozen=True)
class AdditiveModelConfig:
    """Hyperparameters of the additive model.

    Defaults are tuned for ~11 years of monthly data: 10 evenly spaced
    candidate changepoints over the first 80% of history, third-order annual
    Fourier seasonality, and a mild ridge penalty on slope changes.
    """

    n_changepoints: int = 10
    changepoint_range: float = 0.8
    fourier_order: int = 3
    seasonal_period: int = 12
    ridge_lambda: float = 0.5

    def __post_init__(self):
        if self.n_changepoints < 0:
            raise ValueError("n_changepoints must be >= 0")
        if not (0.0 < self.changepoint_range <= 1.0):
            raise ValueError("changepoint_range must lie in (0, 1]")
        if self.fourier_order < 0:
            raise ValueError("fourier_order must be >= 0")
        if self.seasonal_period < 1:
            raise ValueError("seasonal_period must be >= 1")
        if self.ridge_lambda < 0:
            raise ValueError("ridge_lambda must be non-negative")

    def n_params(self) -> int:
        return 2 + self.n_changepoints + 2 * self.fourier_order


@dataclass(frozen=True)
class AdditiveModelFit:
    """Fitted additive model; prediction at t is trend(t) + seasonal(t)."""

    config: AdditiveModelConfig
    n_obs: int
    origin: MonthStamp
    base_intercept: float
    base_slope: float
    changepoints: tuple[int, ...]
    deltas: tuple[float, ...]
    fourier_cos: tuple[float, ...]
    fourier_sin: tuple[float, ...]
    residual_sd: float
    fitted_values: np.ndarray = field(repr=False)

    def trend(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = self.base_intercept + self.base_slope * t
        for c, d in zip(self.changepoints, self.deltas):
            out = out + d * np.maximum(0.0, t - c)
        return out

    def seasonal(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        period = self.config.seasonal_period
        for n in range(1, self.config.fourier_order + 1):
            angle = 2.0 * np.pi * n * t / period
            out = out + self.fourier_cos[n - 1] * np.cos(angle)
            out = out + self.fourier_sin[n - 1] * np.sin(angle)
        return out

    def predict_values(self, t: np.ndarray) -> np.ndarray:
        return self.trend(t) + self.seasonal(t)


def changepoint_indices(n_obs: int, cfg: AdditiveModelConfig) -> tuple[int, ...]:
    """Evenly spaced candidate changepoints over the first
    ``changepoint_range`` of history (deduplicated for short series)."""
    if cfg.n_changepoints == 0:
        return ()
    hist = int(np.floor(n_obs * cfg.changepoint_range))
    if hist < 2:
        return ()
    raw = np.linspace(0, hist - 1, cfg.n_changepoints + 1).round().astype(int)[1:]
    uniq = sorted(set(int(c) for c in raw if c > 0))
    return tuple(uniq)


def design_matrix(t: np.ndarray, changepoints: tuple[int, ...],
                  fourier_order: int, period: int) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    cols = [np.ones_like(t), t]
    for c in changepoints:
        cols.append(np.maximum(0.0, t - c))
    for n in range(1, fourier_order + 1):
        angle = 2.0 * np.pi * n * t / period
        cols.append(np.cos(angle))
        cols.append(np.sin(angle))
    return np.column_stack(cols)


def fit_additive(series: TagSeries, cfg: AdditiveModelConfig | None = None) -> AdditiveModelFit:
    """Fit the additive model by penalized least squares.

    Raises SeriesTooShort below 24 points or when the configuration is not
    identifiable on the series, SingularDesign when the (penalized) normal
    equations are rank-deficient.
    """
    cfg = cfg or AdditiveModelConfig()
    n = len(series)
    if n < MIN_POINTS:
        raise SeriesTooShort(f"additive model needs >= {MIN_POINTS} points, got {n}")
    if cfg.n_params() >= n:
        raise SeriesTooShort(
            f"config with {cfg.n_params()} coefficients is not identifiable on {n} points")

    cps = changepoint_indices(n, cfg)
    t = np.arange(n, dtype=float)
    X = design_matrix(t, cps, cfg.fourier_order, cfg.seasonal_period)
    y = series.values

    # Ridge on delta columns only, expressed as extra least-squares rows so
    # the solve stays SVD-based.
    n_cols = X.shape[1]
    if cps and cfg.ridge_lambda > 0:
        penalty = np.zeros((len(cps), n_cols))
        for j in range(len(cps)):
            penalty[j, 2 + j] = np.sqrt(cfg.ridge_lambda)
        A = np.vstack([X, penalty])
        b = np.concatenate([y, np.zeros(len(cps))])
    else:
        A = X
        b = y
    if np.linalg.matrix_rank(A) < n_cols:
        raise SingularDesign(
            f"design matrix is rank-deficient ({np.linalg.matrix_rank(A)} < {n_cols})")
    beta, *_ = np.linalg.lstsq(A, b, rcond=None)

    fitted = X @ beta
    residuals = y - fitted
    residual_sd = float(np.sqrt(np.mean(residuals**2)))

    k = 2 + len(cps)
    fc = tuple(float(v) for v in beta[k:k + 2 * cfg.fourier_order:2])
    fs = tuple(float(v) for v in beta[k + 1:k + 2 * cfg.fourier_order:2])
    return AdditiveModelFit(
        config=cfg,
        n_obs=n,
        origin=series.end,
        base_intercept=float(beta[0]),
        base_slope=float(beta[1]),
        changepoints=cps,
        deltas=tuple(float(v) for v in beta[2:k]),
        fourier_cos=fc,
        fourier_sin=fs,
        residual_sd=residual_sd,
        fitted_values=fitted,
    )


def predict_additive(fit: AdditiveModelFit, horizon: int, level: float = 0.8) -> Forecast:
    """Extrapolate the final trend segment plus seasonality with a Gaussian
    residual interval ``yhat +- z(level) * residual_sd``."""
    check_horizon(horizon)
    check_level(level)
    t = np.arange(fit.n_obs, fit.n_obs + horizon, dtype=float)
    yhat = fit.predict_values(t)
    half = np.full(horizon, z_quantile(level) * fit.residual_sd)
    return build_forecast(fit.origin, level, yhat, half)
