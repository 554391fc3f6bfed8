"""Dataset acquisition and persistence.

Two sources: a local CSV in the external format, or the Stack Exchange REST
API (question-creation timestamps bucketed into months client-side). All
network traffic goes through an explicitly supplied transport; no other code
path in the package touches the network.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from urllib.parse import quote

import numpy as np

from .dataset import Dataset, MonthStamp, month_range, parse_dataset, serialize_dataset
from .errors import (
    ChecksumMismatch,
    IoError,
    QuotaExhausted,
    RangeEmpty,
    TransportError,
    UnknownTag,
    VersionUnsupported,
)

API_BASE = "https://api.stackexchange.com/2.3"
PAGE_SIZE = 100
MAX_RETRIES_PER_PAGE = 5
METADATA_VERSION = "1"
METADATA_SUFFIX = ".meta"


@dataclass(frozen=True)
class FetchSpec:
    """What to fetch: which tags, over which month range, from which site."""

    tags: tuple[str, ...]
    from_month: MonthStamp
    to_month: MonthStamp
    site: str = "stackoverflow"

    def __post_init__(self):
        object.__setattr__(self, "tags", tuple(self.tags))
        if not self.tags:
            raise ValueError("FetchSpec needs at least one tag")
        if any(not t or t != t.strip() for t in self.tags):
            raise ValueError("tags must be nonempty with no surrounding whitespace")
        if self.from_month > self.to_month:
            raise RangeEmpty(f"empty month range: {self.from_month} > {self.to_month}")

    def months(self) -> list[MonthStamp]:
        return month_range(self.from_month, self.to_month)


@dataclass(frozen=True)
class TransportResponse:
    status: int
    payload: dict


class RequestsTransport:
    """Real HTTP transport over the requests library (gzip handled there)."""

    def __init__(self, timeout: float = 30.0):
        import requests

        self._session = requests.Session()
        self._timeout = timeout

    def get(self, url: str, params: dict) -> TransportResponse:
        import requests

        try:
            resp = self._session.get(url, params=params, timeout=self._timeout)
        except requests.RequestException as exc:
            raise TransportError(f"request failed: {exc}") from exc
        try:
            payload = resp.json()
        except ValueError:
            payload = {}
        return TransportResponse(status=resp.status_code, payload=payload)


def _month_epochs(month: MonthStamp) -> tuple[int, int]:
    start = datetime(month.year, month.month, 1, tzinfo=timezone.utc)
    nxt = month.add(1)
    end = datetime(nxt.year, nxt.month, 1, tzinfo=timezone.utc)
    return int(start.timestamp()), int(end.timestamp())


def _record(events, kind: str, **details) -> None:
    if events is not None:
        events.append({"kind": kind, **details})


def _get_page(transport, url: str, params: dict, sleeper, events) -> dict:
    """One API page with backoff honoring and bounded retries."""
    for attempt in range(MAX_RETRIES_PER_PAGE + 1):
        response = transport.get(url, params=params)
        payload = response.payload or {}
        backoff = payload.get("backoff")
        if response.status == 200 and "error_id" not in payload:
            if backoff:
                _record(events, "backoff", seconds=int(backoff), url=url)
                sleeper(int(backoff))
            return payload
        if attempt == MAX_RETRIES_PER_PAGE:
            break
        wait = int(backoff) if backoff else 1
        _record(events, "backoff", seconds=wait, url=url, status=response.status)
        sleeper(wait)
    raise QuotaExhausted(
        f"page retry budget exhausted for {url} (last status {response.status})")


def _check_tag_exists(transport, spec: FetchSpec, tag: str, sleeper, events) -> None:
    url = f"{API_BASE}/tags/{quote(tag)}/info"
    payload = _get_page(transport, url, {"site": spec.site}, sleeper, events)
    if not payload.get("items"):
        raise UnknownTag(f"tag {tag!r} is unknown to site {spec.site!r}")


def _fetch_tag_months(transport, spec: FetchSpec, tag: str, sleeper, events) -> np.ndarray:
    """Page through the tag's questions, bucketing creation dates by month."""
    months = spec.months()
    counts = np.zeros(len(months))
    base_index = months[0].index
    from_epoch, _ = _month_epochs(months[0])
    _, to_epoch = _month_epochs(months[-1])
    page = 1
    while True:
        params = {
            "site": spec.site,
            "tagged": tag,
            "fromdate": str(from_epoch),
            "todate": str(to_epoch),
            "order": "asc",
            "sort": "creation",
            "pagesize": str(PAGE_SIZE),
            "page": str(page),
        }
        payload = _get_page(transport, f"{API_BASE}/questions", params, sleeper, events)
        for item in payload.get("items", []):
            created = datetime.fromtimestamp(int(item["creation_date"]), tz=timezone.utc)
            idx = created.year * 12 + created.month - 1 - base_index
            if 0 <= idx < len(months):
                counts[idx] += 1
        if payload.get("quota_remaining") == 0 and payload.get("has_more"):
            raise QuotaExhausted(f"API quota exhausted while fetching tag {tag!r}")
        if not payload.get("has_more"):
            return counts
        page += 1


def fetch_tag_counts(spec: FetchSpec, transport, sleeper=time.sleep,
                     events: list | None = None) -> Dataset:
    """Assemble a Dataset of monthly question counts, one tag per column.

    Months with zero questions are stored as 0 (an observation, not a
    missing cell). On quota exhaustion the partial dataset built so far is
    attached to the raised error. Pass ``events`` to observe backoff events.
    """
    months = spec.months()
    values = np.zeros((len(months), len(spec.tags)))
    done = 0
    try:
        for col, tag in enumerate(spec.tags):
            _check_tag_exists(transport, spec, tag, sleeper, events)
            values[:, col] = _fetch_tag_months(transport, spec, tag, sleeper, events)
            done += 1
    except QuotaExhausted as exc:
        partial = None
        if done:
            partial = Dataset(tuple(months), tuple(spec.tags[:done]), values[:, :done].copy())
        raise QuotaExhausted(str(exc), partial=partial) from None
    return Dataset(tuple(months), tuple(spec.tags), values)


# --- persistence ---------------------------------------------------------------


@dataclass(frozen=True)
class DatasetMeta:
    version: str
    fetched_at: str
    site: str
    tags: tuple[str, ...]
    sha256: str
    extra: dict = field(default_factory=dict)


def _meta_path(path: Path) -> Path:
    return Path(str(path) + METADATA_SUFFIX)


def _atomic_write(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name + ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise IoError(f"cannot write {path}: {exc}") from exc


def save_dataset(ds: Dataset, path, *, site: str = "stackoverflow",
                 fetched_at: str | None = None) -> None:
    """Write the canonical CSV plus its sidecar metadata file, atomically."""
    path = Path(path)
    csv_bytes = serialize_dataset(ds).encode("utf-8")
    digest = hashlib.sha256(csv_bytes).hexdigest()
    stamp = fetched_at or datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    meta_lines = [
        f"version {METADATA_VERSION}",
        f"fetched_at {stamp}",
        f"site {site}",
        f"tags {','.join(ds.tags)}",
        f"sha256 {digest}",
    ]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        _atomic_write(path, csv_bytes)
        _atomic_write(_meta_path(path), ("\n".join(meta_lines) + "\n").encode("utf-8"))
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_metadata(path) -> DatasetMeta:
    meta_file = _meta_path(Path(path))
    try:
        text = meta_file.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read metadata {meta_file}: {exc}") from exc
    fields: dict[str, str] = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition(" ")
        fields[key] = value
    version = fields.get("version", "")
    if version != METADATA_VERSION:
        raise VersionUnsupported(version, METADATA_VERSION)
    known = {"version", "fetched_at", "site", "tags", "sha256"}
    return DatasetMeta(
        version=version,
        fetched_at=fields.get("fetched_at", ""),
        site=fields.get("site", ""),
        tags=tuple(t for t in fields.get("tags", "").split(",") if t),
        sha256=fields.get("sha256", ""),
        extra={k: v for k, v in fields.items() if k not in known},
    )


def load_dataset(path) -> Dataset:
    """Load a saved dataset, verifying the sidecar checksum first."""
    path = Path(path)
    meta = read_metadata(path)
    try:
        csv_bytes = path.read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    digest = hashlib.sha256(csv_bytes).hexdigest()
    if digest != meta.sha256:
        raise ChecksumMismatch(
            f"checksum mismatch for {path}: expected {meta.sha256}, got {digest}")
    return parse_dataset(csv_bytes.decode("utf-8"))


def dataset_checksum(ds: Dataset) -> str:
    """Checksum of the canonical serialized form (stable across reloads)."""
    return hashlib.sha256(serialize_dataset(ds).encode("utf-8")).hexdigest()
