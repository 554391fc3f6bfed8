"""JSON wire shapes shared by the HTTP service and the CLI's --json mode."""

from __future__ import annotations

from .changepoint import ChangePoint
from .dataset import Dataset, TagSeries
from .evaluation import BacktestReport, MetricReport, TrendRanking
from .models import Forecast

HISTORY_TAIL_MONTHS = 24


def series_payload(series: TagSeries) -> dict:
    return {
        "tag": series.tag,
        "points": [{"month": str(m), "value": v} for m, v in series.points()],
        "fill_policy": series.fill_policy,
        "filled_months": [str(m) for m in series.filled_months],
    }


def forecast_payload(series: TagSeries, forecast: Forecast) -> dict:
    tail = series.slice(start=series.end.add(-(HISTORY_TAIL_MONTHS - 1))) \
        if len(series) > HISTORY_TAIL_MONTHS else series
    return {
        "tag": series.tag,
        "origin": str(forecast.origin),
        "horizon": forecast.horizon,
        "level": forecast.level,
        "history": [{"month": str(m), "value": v} for m, v in tail.points()],
        "points": [
            {"month": str(p.month), "yhat": p.yhat, "lower": p.lower, "upper": p.upper}
            for p in forecast.points
        ],
    }


def changepoint_payload(points: list[ChangePoint]) -> dict:
    return {
        "changepoints": [
            {
                "month": str(p.month),
                "confidence": p.confidence,
                "direction": p.direction,
                "pre_mean": p.pre_mean,
                "post_mean": p.post_mean,
            }
            for p in points
        ]
    }


def metrics_payload(metrics: MetricReport) -> dict:
    rel = metrics.cumulative_rel_error
    return {
        "mae": metrics.mae,
        "mse": metrics.mse,
        "rmse": metrics.rmse,
        "cumulative_predicted": metrics.cumulative_predicted,
        "cumulative_actual": metrics.cumulative_actual,
        "cumulative_abs_error": metrics.cumulative_abs_error,
        "cumulative_rel_error": None if rel != rel else rel,
        "n": metrics.n,
    }


def backtest_payload(report: BacktestReport) -> dict:
    return {
        "tag": report.tag,
        "model": report.model,
        "config": report.config,
        "split_month": str(report.split_month),
        "holdout": report.holdout,
        "metrics": metrics_payload(report.metrics),
        "residuals": list(report.residuals),
    }


def ranking_payload(ranking: TrendRanking) -> dict:
    return {
        "window_months": ranking.window_months,
        "entries": [{"tag": t, "score": s} for t, s in ranking.entries],
    }


def tags_payload(ds: Dataset) -> dict:
    return {
        "tags": list(ds.tags),
        "from": str(ds.start),
        "to": str(ds.end),
        "months": ds.n_months,
    }
