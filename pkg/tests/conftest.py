from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from stackindex.dataset import MonthStamp, TagSeries, parse_dataset

REPO = Path(__file__).resolve().parents[1]
CORPUS_PATH = REPO / "data" / "sample_corpus.csv"


@pytest.fixture(scope="session")
def corpus_path() -> Path:
    return CORPUS_PATH


@pytest.fixture(scope="session")
def corpus():
    return parse_dataset(CORPUS_PATH.read_text(encoding="utf-8"))


def make_series(values, start=MonthStamp(2010, 1), tag="test") -> TagSeries:
    return TagSeries(tag, start, np.asarray(values, dtype=float))


@pytest.fixture
def series_factory():
    return make_series


def synthetic_trend_seasonal(seed: int, n: int = 72, noise_sd: float = 5.0) -> np.ndarray:
    """Seeded trend + annual seasonality + Gaussian noise, kept non-negative."""
    rng = np.random.default_rng(seed)
    t = np.arange(n, dtype=float)
    slope = rng.uniform(0.5, 3.0)
    base = rng.uniform(50.0, 200.0)
    amp = rng.uniform(5.0, 20.0)
    phase = rng.uniform(0.0, 2.0 * np.pi)
    y = base + slope * t + amp * np.sin(2.0 * np.pi * t / 12.0 + phase)
    y = y + rng.normal(0.0, noise_sd, n)
    return np.maximum(0.0, y)
