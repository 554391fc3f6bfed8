#!/usr/bin/env python3
"""Regenerate data/sample_corpus.csv, the bundled demo/test corpus.

The corpus is SYNTHETIC: a seeded, statistically plausible stand-in for a
2009-01..2019-12 Stack Overflow tag-count export (132 months x 103 tags).
It is shaped to match well-known qualitative facts of that decade -- python's
dominance, the post-2017 surge of the deep-learning frameworks, flash's
decline -- so demos and directional tests behave like they would on a real
export. Its sidecar records site "synthetic" so nobody mistakes it for live
data. Replace it with a live fetch (`stackindex ingest`) when network access
is available.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from stackindex.dataset import Dataset, MonthStamp, month_range  # noqa: E402
from stackindex.ingestion import save_dataset  # noqa: E402

SEED = 20190101
START = MonthStamp(2009, 1)
END = MonthStamp(2019, 12)
OUT = Path(__file__).resolve().parents[1] / "data" / "sample_corpus.csv"

# Month index helpers: t runs 0..131 over 2009-01..2019-12.
N = END.index - START.index + 1


def m(year: int, month: int) -> int:
    return MonthStamp(year, month).index - START.index


def logistic(t: np.ndarray, t0: float, rate: float, cap: float) -> np.ndarray:
    return cap / (1.0 + np.exp(-rate * (t - t0)))


def ramp(t: np.ndarray, t_start: float, slope: float, accel: float = 0.0) -> np.ndarray:
    dt = np.maximum(0.0, t - t_start)
    return slope * dt + accel * dt**2


def decline(t: np.ndarray, start_level: float, rate: float) -> np.ndarray:
    return start_level * np.exp(-rate * t)


def build() -> Dataset:
    rng = np.random.default_rng(SEED)
    t = np.arange(N, dtype=float)

    # Hand-shaped series for the tags the demos and directional tests lean on.
    shaped: dict[str, np.ndarray] = {
        # python overtakes everything: ~2.5k/mo in 2009 to ~17k/mo in 2019
        "python": 2500 + logistic(t, m(2014, 6), 0.045, 15000),
        # r: clearly second in long-run mean
        "r": 400 + logistic(t, m(2013, 6), 0.05, 8000),
        "javascript": 2600 + logistic(t, m(2013, 1), 0.04, 2600),
        "java": 3000 + logistic(t, m(2012, 1), 0.035, 1700),
        "pandas": ramp(t, m(2011, 6), 8.0, 0.12),
        "numpy": 30 + ramp(t, m(2009, 6), 6.0, 0.04),
        "machine-learning": 40 + logistic(t, m(2016, 6), 0.06, 1500),
        "deep-learning": logistic(t, m(2017, 3), 0.09, 900),
        "apache-spark": logistic(t, m(2016, 1), 0.07, 1100),
        "opencv": 25 + logistic(t, m(2014, 1), 0.04, 800),
        # deep-learning frameworks: near-zero before release, surging after 2017
        "keras": np.where(t >= m(2015, 6), logistic(t, m(2017, 10), 0.12, 950), 0.0),
        "tensorflow": np.where(t >= m(2015, 11), logistic(t, m(2017, 8), 0.14, 2300), 0.0),
        "pytorch": np.where(t >= m(2016, 9), logistic(t, m(2018, 8), 0.13, 1000), 0.0),
        "flash": decline(t, 900.0, 0.03),
        "silverlight": decline(t, 420.0, 0.045),
    }

    filler = [
        "c#", "php", "android", "html", "jquery", "c++", "css", "ios", "mysql",
        "sql", "node.js", "arrays", "c", "asp.net", "reactjs", "json",
        "ruby-on-rails", ".net", "sql-server", "swift", "django", "angular",
        "objective-c", "excel", "angularjs", "regex", "typescript", "ruby",
        "linux", "ajax", "iphone", "xml", "vba", "spring", "laravel", "bash",
        "database", "git", "wordpress", "mongodb", "postgresql", "string",
        "flutter", "azure", "docker", "oracle", "kotlin", "multithreading",
        "firebase", "list", "vue.js", "scala", "http", "function", "windows",
        "algorithm", "performance", "visual-studio", "selenium", "rest",
        "eclipse", "express", "winforms", "matlab", "dictionary",
        "unit-testing", "loops", "csv", "flask", "maven", "apache", "tkinter",
        "spring-boot", "dataframe", "go", "hibernate", "file", "class",
        "jupyter-notebook", "matplotlib", "scikit-learn", "nlp",
        "computer-vision", "image-processing", "hadoop", "jenkins",
        "kubernetes", "redis",
    ]
    for name in filler:
        base = float(rng.uniform(20, 1100))
        kind = rng.integers(0, 3)
        if kind == 0:
            level = base + logistic(t, float(rng.uniform(m(2011, 1), m(2017, 1))),
                                    float(rng.uniform(0.03, 0.08)),
                                    base * float(rng.uniform(0.5, 2.0)))
        elif kind == 1:
            level = base + ramp(t, float(rng.uniform(0, m(2013, 1))),
                                float(rng.uniform(0.5, 4.0)))
        else:
            level = decline(t, base * 2.0, float(rng.uniform(0.005, 0.02)))
        shaped[name] = level

    tags = list(shaped)
    assert len(tags) == 103, f"expected 103 tags, got {len(tags)}"

    values = np.zeros((N, len(tags)))
    season = np.sin(2.0 * np.pi * (t % 12) / 12.0 - 0.8)
    for col, name in enumerate(tags):
        level = np.maximum(0.0, shaped[name])
        amp = rng.uniform(0.02, 0.06)
        noisy = level * (1.0 + amp * season) + rng.normal(0.0, 1.0, N) * np.sqrt(level + 1.0)
        values[:, col] = np.maximum(0.0, np.round(noisy))

    return Dataset(tuple(month_range(START, END)), tuple(tags), values)


def main() -> None:
    ds = build()
    OUT.parent.mkdir(parents=True, exist_ok=True)
    save_dataset(ds, OUT, site="synthetic")
    print(f"wrote {ds.n_months}x{ds.n_tags} corpus to {OUT}")


if __name__ == "__main__":
    main()
