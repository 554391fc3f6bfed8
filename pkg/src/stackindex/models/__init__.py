"""Forecast model families and a kind-string dispatch facade.

Model kind identifiers used by the CLI, API, and UI: ``additive``,
``holt-winters``, ``sarima``, ``ensemble``.
"""

from __future__ import annotations

from ..dataset import TagSeries
from ..errors import InvalidOrder, UnknownModelKind
from .additive import AdditiveModelConfig, AdditiveModelFit, fit_additive, predict_additive
from .ensemble import ensemble_forecast
from .forecast import Forecast, ForecastPoint, MAX_HORIZON, build_forecast, z_quantile
from .holt_winters import HoltWintersFit, fit_holt_winters, predict_holt_winters
from .sarima import SarimaFit, SarimaOrder, fit_sarima, predict_sarima, select_order_by_aic

MODEL_KINDS = ("additive", "holt-winters", "sarima", "ensemble")

__all__ = [
    "AdditiveModelConfig",
    "AdditiveModelFit",
    "Forecast",
    "ForecastPoint",
    "HoltWintersFit",
    "MAX_HORIZON",
    "MODEL_KINDS",
    "SarimaFit",
    "SarimaOrder",
    "build_forecast",
    "ensemble_forecast",
    "fit_additive",
    "fit_holt_winters",
    "fit_sarima",
    "forecast_series",
    "predict_additive",
    "predict_holt_winters",
    "predict_sarima",
    "resolve_model_config",
    "select_order_by_aic",
    "z_quantile",
]

_ADDITIVE_KEYS = {"n_changepoints", "changepoint_range", "fourier_order",
                  "seasonal_period", "ridge_lambda"}
_SARIMA_KEYS = {"order", "auto_order"}


def resolve_model_config(kind: str, config: dict | None):
    """Validate per-kind config overrides, returning a normalized snapshot.

    ``additive`` accepts the AdditiveModelConfig fields; ``sarima`` accepts
    ``order`` (six integers) or ``auto_order``; ``ensemble`` accepts the
    union (applied to its members); ``holt-winters`` has no knobs.
    """
    if kind not in MODEL_KINDS:
        raise UnknownModelKind(f"unknown model kind {kind!r}; expected one of {', '.join(MODEL_KINDS)}")
    config = dict(config or {})
    allowed = {
        "additive": _ADDITIVE_KEYS,
        "holt-winters": set(),
        "sarima": _SARIMA_KEYS,
        "ensemble": _ADDITIVE_KEYS | _SARIMA_KEYS,
    }[kind]
    unknown = set(config) - allowed
    if unknown:
        raise UnknownModelKind(
            f"config keys {sorted(unknown)} are not valid for model {kind!r}")
    return config


def _additive_config(config: dict) -> AdditiveModelConfig:
    kwargs = {k: v for k, v in config.items() if k in _ADDITIVE_KEYS}
    try:
        return AdditiveModelConfig(**kwargs)
    except ValueError as exc:
        raise InvalidOrder(str(exc)) from None


def _sarima_order(config: dict) -> SarimaOrder | None:
    order = config.get("order")
    if order is None:
        return None if config.get("auto_order") else SarimaOrder()
    if len(order) != 6:
        raise InvalidOrder("sarima order must be six integers: p, d, q, P, D, Q")
    p, d, q, P, D, Q = (int(v) for v in order)
    return SarimaOrder(p=p, d=d, q=q, P=P, D=D, Q=Q)


def forecast_series(series: TagSeries, kind: str, horizon: int, level: float = 0.8,
                    config: dict | None = None) -> Forecast:
    """Fit the requested model kind on ``series`` and forecast ``horizon``
    months ahead. The ensemble is the median of the other three families."""
    config = resolve_model_config(kind, config)
    if kind == "additive":
        fit = fit_additive(series, _additive_config(config))
        return predict_additive(fit, horizon, level)
    if kind == "holt-winters":
        fit = fit_holt_winters(series)
        return predict_holt_winters(fit, horizon, level)
    if kind == "sarima":
        order = _sarima_order(config)
        if order is None:
            _, fit = select_order_by_aic(series)
        else:
            fit = fit_sarima(series, order)
        return predict_sarima(fit, horizon, level)
    members = [
        forecast_series(series, "additive", horizon, level,
                        {k: v for k, v in config.items() if k in _ADDITIVE_KEYS}),
        forecast_series(series, "holt-winters", horizon, level, None),
        forecast_series(series, "sarima", horizon, level,
                        {k: v for k, v in config.items() if k in _SARIMA_KEYS}),
    ]
    return ensemble_forecast(members)
