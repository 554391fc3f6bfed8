"""Month-indexed count matrix: parsing, validation, slicing, combining.

The unit of analysis is a monthly count series per technology tag. A
:class:`Dataset` is the full month x tag matrix as imported from CSV; a
:class:`TagSeries` is one (possibly combined) column of it with missing
cells filled in.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AmbiguousTag,
    DuplicateMember,
    DuplicateMonth,
    DuplicateTag,
    MalformedHeader,
    NegativeCount,
    NoObservedValues,
    NonContiguousMonths,
    TagNotFound,
    TooFewMembers,
    UnparseableCell,
)

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})(?:-(\d{2}))?$")

YEAR_MIN = 2000
YEAR_MAX = 2100

FILL_NONE = "none"
FILL_LINEAR = "linear-interpolation"


@dataclass(frozen=True, order=True)
class MonthStamp:
    """A calendar month. Ordering is chronological; arithmetic is exact."""

    year: int
    month: int

    def __post_init__(self):
        if not (YEAR_MIN <= self.year <= YEAR_MAX):
            raise ValueError(f"year {self.year} outside {YEAR_MIN}..{YEAR_MAX}")
        if not (1 <= self.month <= 12):
            raise ValueError(f"month {self.month} outside 1..12")

    @property
    def index(self) -> int:
        """Months elapsed since 0000-01; successor of (y,12) is (y+1,1)."""
        return self.year * 12 + self.month - 1

    @classmethod
    def from_index(cls, index: int) -> "MonthStamp":
        return cls(index // 12, index % 12 + 1)

    @classmethod
    def parse(cls, text: str) -> "MonthStamp":
        """Parse ``YYYY-MM`` or ``YYYY-MM-DD`` (the day is ignored)."""
        m = _MONTH_RE.match(text.strip())
        if m is None:
            raise ValueError(f"not a month: {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    def add(self, months: int) -> "MonthStamp":
        return MonthStamp.from_index(self.index + months)

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"


def month_range(start: MonthStamp, end: MonthStamp) -> list[MonthStamp]:
    """All months from start to end inclusive."""
    return [MonthStamp.from_index(i) for i in range(start.index, end.index + 1)]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class TagSeries:
    """One tag's gap-free monthly counts. Immutable after construction.

    ``fill_policy`` records how missing cells were filled when the series was
    extracted from a dataset; ``filled_months`` lists the affected months.
    """

    tag: str
    start: MonthStamp
    values: np.ndarray
    fill_policy: str = FILL_NONE
    filled_months: tuple[MonthStamp, ...] = ()

    def __post_init__(self):
        if not self.tag:
            raise ValueError("tag must be nonempty")
        vals = _readonly(np.asarray(self.values, dtype=float).ravel())
        object.__setattr__(self, "values", vals)
        if vals.size == 0:
            raise ValueError("series must have at least one point")
        if not np.all(np.isfinite(vals)):
            raise ValueError("series values must be finite")
        if np.any(vals < 0):
            raise ValueError("series counts must be non-negative")

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def end(self) -> MonthStamp:
        return self.start.add(len(self) - 1)

    @property
    def months(self) -> tuple[MonthStamp, ...]:
        return tuple(self.start.add(i) for i in range(len(self)))

    def points(self) -> list[tuple[MonthStamp, float]]:
        return list(zip(self.months, (float(v) for v in self.values)))

    def slice(self, start: MonthStamp | None = None, end: MonthStamp | None = None) -> "TagSeries":
        """Restrict to [start, end]; bounds outside the range are clamped."""
        lo = 0 if start is None else max(0, start.index - self.start.index)
        hi = len(self) if end is None else min(len(self), end.index - self.start.index + 1)
        if lo >= hi:
            raise ValueError("empty slice")
        filled = tuple(m for m in self.filled_months if lo <= m.index - self.start.index < hi)
        return TagSeries(self.tag, self.start.add(lo), self.values[lo:hi].copy(),
                         self.fill_policy, filled)


@dataclass(frozen=True)
class Dataset:
    """The month x tag count matrix. NaN cells are missing (not zero)."""

    months: tuple[MonthStamp, ...]
    tags: tuple[str, ...]
    values: np.ndarray
    date_column: str = "month"

    def __post_init__(self):
        object.__setattr__(self, "months", tuple(self.months))
        object.__setattr__(self, "tags", tuple(self.tags))
        vals = _readonly(np.asarray(self.values, dtype=float))
        object.__setattr__(self, "values", vals)
        if vals.ndim != 2:
            raise ValueError("values must be a 2-D matrix")
        if vals.shape != (len(self.months), len(self.tags)):
            raise ValueError("values shape must be (months, tags)")
        if not self.months:
            raise ValueError("dataset must contain at least one month")
        idx = [m.index for m in self.months]
        if idx != list(range(idx[0], idx[0] + len(idx))):
            raise ValueError("months must be contiguous and ascending")
        if any(not t for t in self.tags):
            raise ValueError("tag names must be nonempty")
        if len(set(self.tags)) != len(self.tags):
            raise ValueError("tag names must be unique")
        observed = vals[~np.isnan(vals)]
        if not np.all(np.isfinite(observed)):
            raise ValueError("observed values must be finite")
        if np.any(observed < 0):
            raise ValueError("observed values must be non-negative")

    @property
    def missing(self) -> np.ndarray:
        """Boolean mask of missing cells (same shape as ``values``)."""
        return np.isnan(self.values)

    @property
    def n_months(self) -> int:
        return len(self.months)

    @property
    def n_tags(self) -> int:
        return len(self.tags)

    @property
    def start(self) -> MonthStamp:
        return self.months[0]

    @property
    def end(self) -> MonthStamp:
        return self.months[-1]

    def _resolve(self, tag: str) -> int:
        wanted = tag.strip().lower()
        hits = [i for i, t in enumerate(self.tags) if t.lower() == wanted]
        if not hits:
            raise TagNotFound(tag)
        if len(hits) > 1:
            names = ", ".join(self.tags[i] for i in hits)
            raise AmbiguousTag(f"tag {tag!r} matches multiple columns: {names}")
        return hits[0]


def parse_count(cell: str, row: int, col: int) -> float:
    cell = cell.strip()
    try:
        value = float(cell)
    except ValueError:
        raise UnparseableCell(row, col, cell) from None
    if not np.isfinite(value):
        raise UnparseableCell(row, col, cell)
    if value < 0:
        raise NegativeCount(f"negative count at row {row}, column {col}: {cell}")
    return value


def parse_dataset(csv_text: str) -> Dataset:
    """Parse the CSV external format into a validated :class:`Dataset`.

    First header cell names the date column, the rest are tag names. Empty
    cells are recorded as missing, which is distinct from an explicit 0.
    """
    reader = csv.reader(io.StringIO(csv_text))
    rows = [row for row in reader if row]
    if not rows:
        raise MalformedHeader("empty input")
    header = [c.strip() for c in rows[0]]
    if len(header) < 2:
        raise MalformedHeader("header needs a date column and at least one tag column")
    if not header[0]:
        raise MalformedHeader("first header cell (date column) is empty")
    tags = header[1:]
    if any(not t for t in tags):
        raise MalformedHeader("empty tag name in header")
    seen: dict[str, int] = {}
    for t in tags:
        if t in seen:
            raise DuplicateTag(f"tag column {t!r} appears more than once")
        seen[t] = 1

    parsed: list[tuple[MonthStamp, list[float | None]]] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise UnparseableCell(lineno, len(row) + 1, "",
                                  f"row {lineno} has {len(row)} cells, expected {len(header)}")
        try:
            month = MonthStamp.parse(row[0])
        except ValueError:
            raise UnparseableCell(lineno, 1, row[0]) from None
        cells: list[float | None] = []
        for col, cell in enumerate(row[1:], start=2):
            cells.append(None if cell.strip() == "" else parse_count(cell, lineno, col))
        parsed.append((month, cells))

    if not parsed:
        raise MalformedHeader("no data rows")
    parsed.sort(key=lambda p: p[0])
    months = [p[0] for p in parsed]
    for prev, cur in zip(months, months[1:]):
        if cur.index == prev.index:
            raise DuplicateMonth(f"month {cur} appears more than once")
        if cur.index != prev.index + 1:
            raise NonContiguousMonths(prev.add(1))

    values = np.full((len(months), len(tags)), np.nan)
    for r, (_, cells) in enumerate(parsed):
        for c, v in enumerate(cells):
            if v is not None:
                values[r, c] = v
    return Dataset(tuple(months), tuple(tags), values, date_column=header[0])


def format_count(value: float) -> str:
    """Canonical decimal literal: integral values print without a fraction."""
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def serialize_dataset(ds: Dataset) -> str:
    """Inverse of :func:`parse_dataset`; values and missing mask round-trip
    bit-exactly. Output months are canonical ``YYYY-MM``, lines end in \\n."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([ds.date_column, *ds.tags])
    miss = ds.missing
    for r, month in enumerate(ds.months):
        row = [str(month)]
        for c in range(ds.n_tags):
            row.append("" if miss[r, c] else format_count(ds.values[r, c]))
        writer.writerow(row)
    return out.getvalue()


def get_series(ds: Dataset, tag: str) -> TagSeries:
    """Extract one tag's series, matching the tag case-insensitively.

    Missing cells are filled by linear interpolation between the nearest
    observed neighbors; missing cells before the first (after the last)
    observation take the first (last) observed value.
    """
    col = ds._resolve(tag)
    raw = ds.values[:, col]
    missing = np.isnan(raw)
    if missing.all():
        raise NoObservedValues(f"tag {ds.tags[col]!r} has no observed values")
    values = raw.copy()
    filled: tuple[MonthStamp, ...] = ()
    if missing.any():
        obs_idx = np.flatnonzero(~missing)
        gap_idx = np.flatnonzero(missing)
        values[gap_idx] = np.interp(gap_idx, obs_idx, raw[obs_idx])
        filled = tuple(ds.months[int(i)] for i in gap_idx)
    policy = FILL_LINEAR if filled else FILL_NONE
    return TagSeries(ds.tags[col], ds.months[0], values, policy, filled)


def combine(ds: Dataset, tags: list[str]) -> TagSeries:
    """Pointwise sum of two or more member series.

    The combined name joins the members' canonical names with "+" in input
    order; the result spans the dataset's full month range.
    """
    if len(tags) < 2:
        raise TooFewMembers("combine requires at least two distinct tags")
    cols = [ds._resolve(t) for t in tags]
    seen: set[int] = set()
    for t, c in zip(tags, cols):
        if c in seen:
            raise DuplicateMember(f"tag {t!r} listed more than once")
        seen.add(c)
    members = [get_series(ds, t) for t in tags]
    total = np.sum([m.values for m in members], axis=0)
    filled = sorted({m for s in members for m in s.filled_months}, key=lambda m: m.index)
    policy = FILL_LINEAR if filled else FILL_NONE
    name = "+".join(ds.tags[c] for c in cols)
    return TagSeries(name, ds.months[0], total, policy, tuple(filled))
