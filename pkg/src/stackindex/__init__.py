"""Technology-trend forecasting over monthly Stack Overflow tag counts."""

from .changepoint import ChangePoint, detect_changepoints
from .dataset import (
    Dataset,
    MonthStamp,
    TagSeries,
    combine,
    get_series,
    month_range,
    parse_dataset,
    serialize_dataset,
)
from .evaluation import (
    BacktestReport,
    MetricReport,
    TrendRanking,
    backtest,
    backtest_series,
    compute_metrics,
    trend_ranking,
)
from .ingestion import (
    FetchSpec,
    dataset_checksum,
    fetch_tag_counts,
    load_dataset,
    save_dataset,
)
from .models import (
    AdditiveModelConfig,
    Forecast,
    MODEL_KINDS,
    SarimaOrder,
    ensemble_forecast,
    fit_additive,
    fit_holt_winters,
    fit_sarima,
    forecast_series,
    predict_additive,
    predict_holt_winters,
    predict_sarima,
)

__version__ = "0.1.0"
