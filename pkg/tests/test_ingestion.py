from __future__ import annotations

from datetime import datetime, timezone

import numpy as np
import pytest

from stackindex.dataset import MonthStamp, parse_dataset, serialize_dataset
from stackindex.errors import (
    ChecksumMismatch,
    IoError,
    QuotaExhausted,
    RangeEmpty,
    UnknownTag,
    VersionUnsupported,
)
from stackindex.ingestion import (
    FetchSpec,
    TransportResponse,
    dataset_checksum,
    fetch_tag_counts,
    load_dataset,
    read_metadata,
    save_dataset,
)


def epoch(year, month, day=15):
    return int(datetime(year, month, day, tzinfo=timezone.utc).timestamp())


class FakeTransport:
    """Scripted transport: maps (path, page) to payloads; counts calls."""

    def __init__(self, questions_by_tag, fail_first=0, backoff_on_success=None):
        self.questions_by_tag = questions_by_tag
        self.fail_first = fail_first
        self.backoff_on_success = backoff_on_success
        self.calls = []

    def get(self, url, params):
        self.calls.append((url, dict(params)))
        if "/tags/" in url and url.endswith("/info"):
            tag = url.split("/tags/")[1].split("/")[0]
            items = [{"name": tag}] if tag in self.questions_by_tag else []
            return TransportResponse(200, {"items": items, "has_more": False,
                                           "quota_remaining": 200})
        if self.fail_first > 0:
            self.fail_first -= 1
            return TransportResponse(429, {"error_id": 502, "backoff": 2})
        tag = params["tagged"]
        page = int(params["page"])
        per_page = int(params["pagesize"])
        stamps = self.questions_by_tag[tag]
        chunk = stamps[(page - 1) * per_page:page * per_page]
        payload = {
            "items": [{"creation_date": s} for s in chunk],
            "has_more": page * per_page < len(stamps),
            "quota_remaining": 100,
        }
        if self.backoff_on_success is not None:
            payload["backoff"] = self.backoff_on_success
        return TransportResponse(200, payload)


def no_sleep(_seconds):
    return None


class TestFetchSpec:
    def test_range_must_be_ordered(self):
        with pytest.raises(RangeEmpty):
            FetchSpec(("python",), MonthStamp(2010, 2), MonthStamp(2010, 1))

    def test_tags_required(self):
        with pytest.raises(ValueError):
            FetchSpec((), MonthStamp(2010, 1), MonthStamp(2010, 2))

    def test_month_count_arithmetic(self):
        spec = FetchSpec(("python",), MonthStamp(2009, 1), MonthStamp(2019, 12))
        assert len(spec.months()) == 11 * 12


class TestFetch:
    def test_three_month_fetch_buckets_by_month(self):
        spec = FetchSpec(("python",), MonthStamp(2019, 1), MonthStamp(2019, 3))
        transport = FakeTransport({
            "python": [epoch(2019, 1), epoch(2019, 1), epoch(2019, 2), epoch(2019, 3),
                       epoch(2019, 3), epoch(2019, 3)],
        })
        ds = fetch_tag_counts(spec, transport, sleeper=no_sleep)
        assert ds.n_months == 3 and ds.n_tags == 1
        assert ds.values[:, 0].tolist() == [2.0, 1.0, 3.0]

    def test_zero_months_are_observations(self):
        spec = FetchSpec(("python",), MonthStamp(2019, 1), MonthStamp(2019, 3))
        transport = FakeTransport({"python": [epoch(2019, 2)]})
        ds = fetch_tag_counts(spec, transport, sleeper=no_sleep)
        assert ds.values[:, 0].tolist() == [0.0, 1.0, 0.0]
        assert not ds.missing.any()

    def test_pagination(self):
        stamps = [epoch(2019, 1)] * 150 + [epoch(2019, 2)] * 30
        spec = FetchSpec(("python",), MonthStamp(2019, 1), MonthStamp(2019, 2))
        transport = FakeTransport({"python": stamps})
        ds = fetch_tag_counts(spec, transport, sleeper=no_sleep)
        assert ds.values[:, 0].tolist() == [150.0, 30.0]
        pages = [p for u, p in transport.calls if "/questions" in u]
        assert [p["page"] for p in pages] == ["1", "2"]

    def test_retry_after_429_records_backoff_event(self):
        spec = FetchSpec(("python",), MonthStamp(2019, 1), MonthStamp(2019, 1))
        transport = FakeTransport({"python": [epoch(2019, 1)]}, fail_first=1)
        slept = []
        events = []
        ds = fetch_tag_counts(spec, transport, sleeper=slept.append, events=events)
        assert ds.values[0, 0] == 1.0
        backoffs = [e for e in events if e["kind"] == "backoff"]
        assert len(backoffs) == 1
        assert backoffs[0]["seconds"] == 2
        assert slept == [2]

    def test_backoff_field_on_success_is_honored(self):
        spec = FetchSpec(("python",), MonthStamp(2019, 1), MonthStamp(2019, 1))
        transport = FakeTransport({"python": [epoch(2019, 1)]}, backoff_on_success=7)
        slept = []
        fetch_tag_counts(spec, transport, sleeper=slept.append)
        assert 7 in slept

    def test_retry_budget_exhaustion_attaches_partial(self):
        spec = FetchSpec(("python", "r"), MonthStamp(2019, 1), MonthStamp(2019, 1))

        class AlwaysThrottled(FakeTransport):
            def get(self, url, params):
                if "/questions" in url and params["tagged"] == "r":
                    self.calls.append((url, dict(params)))
                    return TransportResponse(429, {"error_id": 502, "backoff": 1})
                return super().get(url, params)

        transport = AlwaysThrottled({"python": [epoch(2019, 1)], "r": []})
        with pytest.raises(QuotaExhausted) as err:
            fetch_tag_counts(spec, transport, sleeper=no_sleep)
        partial = err.value.partial
        assert partial is not None
        assert partial.tags == ("python",)
        assert partial.values[0, 0] == 1.0

    def test_unknown_tag(self):
        spec = FetchSpec(("nosuchtag",), MonthStamp(2019, 1), MonthStamp(2019, 1))
        transport = FakeTransport({})
        with pytest.raises(UnknownTag):
            fetch_tag_counts(spec, transport, sleeper=no_sleep)

    def test_deterministic_under_deterministic_transport(self):
        spec = FetchSpec(("a", "b"), MonthStamp(2019, 1), MonthStamp(2019, 2))
        data = {"a": [epoch(2019, 1)], "b": [epoch(2019, 2), epoch(2019, 2)]}
        ds1 = fetch_tag_counts(spec, FakeTransport(data), sleeper=no_sleep)
        ds2 = fetch_tag_counts(spec, FakeTransport(data), sleeper=no_sleep)
        assert ds1.tags == ds2.tags
        assert np.array_equal(ds1.values, ds2.values)

    def test_full_decade_ten_tags(self):
        tags = tuple(f"tag{i}" for i in range(10))
        spec = FetchSpec(tags, MonthStamp(2009, 1), MonthStamp(2019, 12))
        transport = FakeTransport({t: [epoch(2012, 5)] for t in tags})
        ds = fetch_tag_counts(spec, transport, sleeper=no_sleep)
        assert (ds.n_months, ds.n_tags) == (132, 10)


class TestPersistence:
    def make_ds(self):
        return parse_dataset("month,a,b\n2020-01,1,\n2020-02,2.5,3\n")

    def test_round_trip(self, tmp_path):
        ds = self.make_ds()
        path = tmp_path / "data.csv"
        save_dataset(ds, path)
        loaded = load_dataset(path)
        assert loaded.tags == ds.tags
        assert np.array_equal(loaded.missing, ds.missing)
        assert serialize_dataset(loaded) == serialize_dataset(ds)

    def test_metadata_contents(self, tmp_path):
        path = tmp_path / "data.csv"
        save_dataset(self.make_ds(), path, site="stackoverflow",
                     fetched_at="2021-07-31T00:00:00Z")
        meta = read_metadata(path)
        assert meta.version == "1"
        assert meta.site == "stackoverflow"
        assert meta.fetched_at == "2021-07-31T00:00:00Z"
        assert meta.tags == ("a", "b")
        assert len(meta.sha256) == 64

    def test_corrupted_byte_fails_checksum(self, tmp_path):
        path = tmp_path / "data.csv"
        save_dataset(self.make_ds(), path)
        raw = bytearray(path.read_bytes())
        raw[-2] = ord("9")
        path.write_bytes(bytes(raw))
        with pytest.raises(ChecksumMismatch):
            load_dataset(path)

    def test_future_version_rejected_naming_both(self, tmp_path):
        path = tmp_path / "data.csv"
        save_dataset(self.make_ds(), path)
        meta_path = tmp_path / "data.csv.meta"
        meta_path.write_text(meta_path.read_text().replace("version 1", "version 2"))
        with pytest.raises(VersionUnsupported) as err:
            load_dataset(path)
        assert err.value.found == "2"
        assert err.value.supported == "1"

    def test_missing_sidecar_is_io_error(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("month,a\n2020-01,1\n")
        with pytest.raises(IoError):
            load_dataset(path)

    def test_checksum_is_stable(self):
        ds = self.make_ds()
        assert dataset_checksum(ds) == dataset_checksum(ds)

    def test_shipped_corpus_loads_with_valid_sidecar(self, corpus_path):
        ds = load_dataset(corpus_path)
        assert (ds.n_months, ds.n_tags) == (132, 103)
        meta = read_metadata(corpus_path)
        assert meta.site == "synthetic"
        assert len(meta.tags) == 103
