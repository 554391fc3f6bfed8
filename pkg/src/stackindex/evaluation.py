"""Forecast-error metrics, holdout backtests, and trend ranking."""

from __future__ import annotations

import io
import csv
import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, MonthStamp, TagSeries, combine, get_series
from .errors import EmptyInput, HoldoutTooLong, LengthMismatch, WindowTooLong
from .models import MAX_HORIZON, forecast_series, resolve_model_config

BACKTEST_CSV_HEADER = "tag,model,split_month,holdout,mae,mse,rmse,cum_abs_err,cum_rel_err"


@dataclass(frozen=True)
class MetricReport:
    """Scalar errors over one residual vector; rmse is sqrt(mse) exactly."""

    mae: float
    mse: float
    rmse: float
    cumulative_predicted: float
    cumulative_actual: float
    cumulative_abs_error: float
    cumulative_rel_error: float
    n: int


@dataclass(frozen=True)
class BacktestReport:
    tag: str
    model: str
    config: dict
    split_month: MonthStamp
    holdout: int
    metrics: MetricReport
    residuals: tuple[float, ...]

    def csv_row(self) -> str:
        m = self.metrics
        rel = "" if math.isnan(m.cumulative_rel_error) else repr(m.cumulative_rel_error)
        cells = [self.tag, self.model, str(self.split_month), str(self.holdout),
                 repr(m.mae), repr(m.mse), repr(m.rmse),
                 repr(m.cumulative_abs_error), rel]
        out = io.StringIO()
        csv.writer(out, lineterminator="\n").writerow(cells)
        return out.getvalue().rstrip("\n")


@dataclass(frozen=True)
class TrendRanking:
    """Tags ordered by mean monthly count over the ranking window,
    descending; ties break alphabetically."""

    window_months: int
    entries: tuple[tuple[str, float], ...]


def compute_metrics(actual, predicted) -> MetricReport:
    """MAE / MSE / RMSE plus cumulative-count errors over a holdout.

    All fields derive from one residual vector in a single pass, so the
    rmse = sqrt(mse) identity holds to full precision.
    """
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.ndim != 1 or p.ndim != 1:
        raise LengthMismatch("inputs must be one-dimensional")
    if a.size != p.size:
        raise LengthMismatch(f"length mismatch: {a.size} actual vs {p.size} predicted")
    if a.size == 0:
        raise EmptyInput("cannot compute metrics over zero points")
    residuals = p - a
    mae = float(np.mean(np.abs(residuals)))
    mse = float(np.mean(residuals**2))
    rmse = math.sqrt(mse)
    cum_p = float(np.sum(p))
    cum_a = float(np.sum(a))
    cum_abs = abs(cum_p - cum_a)
    cum_rel = cum_abs / cum_a if cum_a > 0 else float("nan")
    return MetricReport(mae=mae, mse=mse, rmse=rmse,
                        cumulative_predicted=cum_p, cumulative_actual=cum_a,
                        cumulative_abs_error=cum_abs, cumulative_rel_error=cum_rel,
                        n=int(a.size))


def backtest_series(series: TagSeries, kind: str, holdout_months: int,
                    config: dict | None = None, level: float = 0.8) -> BacktestReport:
    """Fit on the series minus its final ``holdout_months``, forecast the
    holdout, and score the forecast against the held-out truth.

    Residuals use the unclamped predictions so error metrics stay symmetric.
    """
    if not (1 <= holdout_months <= MAX_HORIZON):
        raise HoldoutTooLong(f"holdout must lie in 1..{MAX_HORIZON} months, got {holdout_months}")
    if holdout_months >= len(series):
        raise HoldoutTooLong("holdout leaves no training data")
    config = resolve_model_config(kind, config)
    train = series.slice(end=series.start.add(len(series) - holdout_months - 1))
    actual = series.values[-holdout_months:]
    forecast = forecast_series(train, kind, holdout_months, level, config)
    predicted = np.asarray(forecast.yhat_raw)
    metrics = compute_metrics(actual, predicted)
    return BacktestReport(
        tag=series.tag,
        model=kind,
        config=config,
        split_month=train.end,
        holdout=holdout_months,
        metrics=metrics,
        residuals=tuple(float(v) for v in (predicted - actual)),
    )


def backtest(ds: Dataset, tag: str, kind: str, holdout_months: int,
             config: dict | None = None, level: float = 0.8,
             combine_tags: list[str] | None = None) -> BacktestReport:
    """Dataset-level entry point; ``combine_tags`` sums member series first."""
    series = combine(ds, combine_tags) if combine_tags else get_series(ds, tag)
    return backtest_series(series, kind, holdout_months, config, level)


def naive_last_value_forecast(series: TagSeries, holdout_months: int) -> np.ndarray:
    """Baseline: repeat the last pre-holdout value across the holdout."""
    if holdout_months >= len(series):
        raise HoldoutTooLong("holdout leaves no training data")
    return np.full(holdout_months, series.values[-holdout_months - 1])


def trend_ranking(ds: Dataset, window_months: int, top: int = 10) -> TrendRanking:
    """Top tags by mean count over the dataset's final ``window_months``."""
    if window_months < 1:
        raise WindowTooLong("window must be >= 1 month")
    if window_months > ds.n_months:
        raise WindowTooLong(
            f"window of {window_months} months exceeds the dataset's {ds.n_months}")
    if top < 1:
        raise ValueError("top must be >= 1")
    scores = []
    for tag in ds.tags:
        series = get_series(ds, tag)
        scores.append((tag, float(np.mean(series.values[-window_months:]))))
    scores.sort(key=lambda e: (-e[1], e[0]))
    return TrendRanking(window_months=window_months, entries=tuple(scores[:top]))


def backtest_csv(reports: list[BacktestReport]) -> str:
    lines = [BACKTEST_CSV_HEADER]
    lines.extend(r.csv_row() for r in reports)
    return "\n".join(lines) + "\n"
