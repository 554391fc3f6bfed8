"""Forecast container and the shared prediction-interval policy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from ..dataset import MonthStamp
from ..errors import HorizonTooLarge, InvalidLevel

MAX_HORIZON = 24
HORIZON_CAP_MESSAGE = (
    "horizon exceeds the 24-month cap: with the volume of history available, "
    "forecasts are only considered reliable up to 2 years ahead"
)

LEVEL_MIN = 0.5
LEVEL_MAX = 0.99


def check_horizon(horizon: int) -> int:
    if not isinstance(horizon, int) or horizon < 1:
        raise HorizonTooLarge(f"horizon must be a positive number of months, got {horizon!r}")
    if horizon > MAX_HORIZON:
        raise HorizonTooLarge(f"{HORIZON_CAP_MESSAGE} (requested {horizon})")
    return horizon


def check_level(level: float) -> float:
    if not (LEVEL_MIN <= level <= LEVEL_MAX):
        raise InvalidLevel(f"interval level must lie in [{LEVEL_MIN}, {LEVEL_MAX}], got {level}")
    return float(level)


def z_quantile(level: float) -> float:
    """Standard normal quantile of (1+level)/2, e.g. ~1.96 for level 0.95."""
    return float(norm.ppf((1.0 + level) / 2.0))


@dataclass(frozen=True)
class ForecastPoint:
    month: MonthStamp
    yhat: float
    lower: float
    upper: float


@dataclass(frozen=True)
class Forecast:
    """Point predictions with symmetric intervals over a monthly horizon.

    ``yhat_raw`` keeps the unclamped predictions; the public ``points`` clamp
    negative point forecasts to zero since counts cannot be negative.
    """

    origin: MonthStamp
    horizon: int
    level: float
    points: tuple[ForecastPoint, ...]
    yhat_raw: tuple[float, ...]

    def __post_init__(self):
        if self.horizon != len(self.points) or self.horizon < 1:
            raise ValueError("horizon must equal the number of forecast points")
        if len(self.yhat_raw) != self.horizon:
            raise ValueError("yhat_raw must have one value per point")
        expected = self.origin.add(1)
        for p in self.points:
            if p.month != expected:
                raise ValueError("forecast months must be consecutive from the origin")
            if not (p.lower <= p.yhat <= p.upper):
                raise ValueError(f"interval violated at {p.month}: {p.lower} <= {p.yhat} <= {p.upper}")
            expected = expected.add(1)

    @property
    def months(self) -> tuple[MonthStamp, ...]:
        return tuple(p.month for p in self.points)

    @property
    def yhat(self) -> np.ndarray:
        return np.array([p.yhat for p in self.points])

    @property
    def lower(self) -> np.ndarray:
        return np.array([p.lower for p in self.points])

    @property
    def upper(self) -> np.ndarray:
        return np.array([p.upper for p in self.points])


def build_forecast(origin: MonthStamp, level: float, yhat: np.ndarray,
                   half_width: np.ndarray) -> Forecast:
    """Assemble a Forecast from raw predictions and interval half-widths.

    Negative point forecasts clamp to 0 (the raw value is retained); bounds
    are re-ordered where clamping would break lower <= yhat <= upper.
    """
    yhat = np.asarray(yhat, dtype=float)
    half = np.asarray(half_width, dtype=float)
    points = []
    for i in range(yhat.size):
        raw = float(yhat[i])
        clamped = max(0.0, raw)
        lower = min(raw - float(half[i]), clamped)
        upper = max(raw + float(half[i]), clamped)
        points.append(ForecastPoint(origin.add(i + 1), clamped, lower, upper))
    return Forecast(origin, yhat.size, float(level), tuple(points), tuple(float(v) for v in yhat))
