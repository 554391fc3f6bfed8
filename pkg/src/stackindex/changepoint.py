"""Offline mean-shift detection: CUSUM with a permutation bootstrap.

For a segment x with mean x_bar, the statistic is the running cumulative
deviation S_t = sum_{i<=t}(x_i - x_bar). The candidate split is the argmax of
|S_t|; its confidence is the fraction of seeded random permutations of the
segment whose max |S| stays below the observed one. Confident splits recurse
into both halves (binary segmentation) until ``max_points`` is reached.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import MonthStamp, TagSeries
from .errors import SeriesTooShort

MIN_POINTS = 24
MIN_SEGMENT = 12
GUARD_MONTHS = 6  # never report within this many months of either series end
N_PERMUTATIONS = 1000
PERMUTATION_SEED = 42


@dataclass(frozen=True)
class ChangePoint:
    """A month where the mean level shifts; the month is the first month of
    the new regime."""

    month: MonthStamp
    confidence: float
    direction: str
    pre_mean: float
    post_mean: float

    def __post_init__(self):
        if self.direction not in ("up", "down"):
            raise ValueError("direction must be 'up' or 'down'")
        if not (0.0 <= self.confidence <= 1.0):
            raise ValueError("confidence must lie in [0, 1]")


def _cusum(values: np.ndarray) -> np.ndarray:
    return np.cumsum(values - values.mean())


def _segment_candidate(x: np.ndarray, lo: int, hi: int, n_total: int,
                       rng: np.random.Generator):
    """Best split of x[lo:hi] honoring the series-level guard band.

    Returns (split_index, confidence) where the split index t means the new
    regime starts at t+1, or None when no admissible split exists.
    """
    seg = x[lo:hi]
    m = len(seg)
    if m < MIN_SEGMENT:
        return None
    # split t admissible iff the reported month t+1 is >= GUARD_MONTHS away
    # from both series ends and both sides of the split are nonempty.
    lo_t = max(lo, GUARD_MONTHS - 1)
    hi_t = min(hi - 2, n_total - GUARD_MONTHS - 2)
    if lo_t > hi_t:
        return None
    local = np.arange(lo_t - lo, hi_t - lo + 1)
    s = _cusum(seg)
    stats = np.abs(s[local])
    best = int(np.argmax(stats))
    observed = float(stats[best])
    split = lo + int(local[best])

    perms = rng.permuted(np.tile(seg, (N_PERMUTATIONS, 1)), axis=1)
    ps = np.cumsum(perms - seg.mean(), axis=1)
    perm_stats = np.max(np.abs(ps[:, local]), axis=1)
    confidence = float(np.count_nonzero(perm_stats < observed) / N_PERMUTATIONS)
    return split, confidence


def detect_changepoints(series: TagSeries, min_confidence: float = 0.9,
                        max_points: int = 3, seed: int = PERMUTATION_SEED) -> list[ChangePoint]:
    """Binary segmentation over the CUSUM statistic, bootstrap-scored.

    Deterministic for a fixed seed. Detected points are at least 6 months
    from either series end and each recursed half keeps at least 12 points.
    Results are sorted by month ascending.
    """
    n = len(series)
    if n < MIN_POINTS:
        raise SeriesTooShort(f"changepoint detection needs >= {MIN_POINTS} points, got {n}")
    if not (0.5 <= min_confidence < 1.0):
        raise ValueError("min_confidence must lie in [0.5, 1)")
    if max_points < 1:
        raise ValueError("max_points must be >= 1")

    x = series.values
    rng = np.random.default_rng(seed)
    found: list[tuple[int, float, float, float]] = []

    def recurse(lo: int, hi: int) -> None:
        if len(found) >= max_points:
            return
        candidate = _segment_candidate(x, lo, hi, n, rng)
        if candidate is None:
            return
        split, confidence = candidate
        if confidence < min_confidence:
            return
        pre = float(np.mean(x[lo:split + 1]))
        post = float(np.mean(x[split + 1:hi]))
        found.append((split, confidence, pre, post))
        if split + 1 - lo >= MIN_SEGMENT:
            recurse(lo, split + 1)
        if hi - (split + 1) >= MIN_SEGMENT:
            recurse(split + 1, hi)

    recurse(0, n)

    points = []
    for split, confidence, pre, post in sorted(found):
        points.append(ChangePoint(
            month=series.start.add(split + 1),
            confidence=confidence,
            direction="up" if post > pre else "down",
            pre_mean=pre,
            post_mean=post,
        ))
    return points
