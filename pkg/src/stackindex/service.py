"""HTTP JSON API over a stored dataset.

A thin adapter: every endpoint calls the underlying module operation and
serializes its result via the wire module, so responses are reproducible by
direct calls. Responses carry the dataset checksum; identical requests are
served from a small LRU cache while the checksum is unchanged.
"""

from __future__ import annotations

import hashlib
import json
import threading
from collections import OrderedDict
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import wire
from .changepoint import detect_changepoints
from .dataset import Dataset, MonthStamp, combine, get_series
from .errors import (
    AmbiguousTag,
    DuplicateMember,
    HoldoutTooLong,
    HorizonTooLarge,
    InvalidLevel,
    InvalidOrder,
    StackIndexError,
    TagNotFound,
    TooFewMembers,
    UnknownModelKind,
    WindowTooLong,
)
from .evaluation import backtest_series, trend_ranking
from .ingestion import load_dataset, read_metadata
from .models import MAX_HORIZON, MODEL_KINDS, forecast_series, resolve_model_config
from .models.forecast import LEVEL_MAX, LEVEL_MIN

API_PREFIX = "/api/v1"
CACHE_SIZE = 128

ENV_STORE = "STACKINDEX_STORE"
ENV_BIND = "STACKINDEX_BIND"
ENV_CORS = "STACKINDEX_CORS_ORIGIN"

_NOT_FOUND = (TagNotFound,)
# request-shape problems surface as 422; everything else is a 500 model failure
_INVALID = (AmbiguousTag, DuplicateMember, TooFewMembers, HorizonTooLarge,
            InvalidLevel, InvalidOrder, UnknownModelKind, HoldoutTooLong,
            WindowTooLong)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details: dict | None = None):
        self.status = status
        self.code = code
        self.message = message
        self.details = details or {}
        super().__init__(message)


class ForecastRequest(BaseModel):
    tags: list[str]
    combine: bool = False
    model: str = "additive"
    horizon: int = 12
    level: float = 0.8
    config: dict | None = None


class BacktestRequest(BaseModel):
    tags: list[str]
    combine: bool = False
    model: str = "additive"
    holdout: int = 12
    level: float = 0.8
    config: dict | None = None


class _ResponseCache:
    """Bounded LRU keyed by (checksum, request fingerprint); thread-safe."""

    def __init__(self, size: int = CACHE_SIZE):
        self._size = size
        self._lock = threading.Lock()
        self._entries: OrderedDict[tuple, dict] = OrderedDict()

    def get(self, key: tuple):
        with self._lock:
            if key in self._entries:
                self._entries.move_to_end(key)
                return self._entries[key]
        return None

    def put(self, key: tuple, value: dict) -> None:
        with self._lock:
            self._entries[key] = value
            self._entries.move_to_end(key)
            while len(self._entries) > self._size:
                self._entries.popitem(last=False)


def resolve_store(store_path) -> Path:
    """A store is a dataset CSV or a directory holding at least one."""
    store = Path(store_path)
    if store.is_dir():
        candidates = sorted(store.glob("*.csv"))
        if not candidates:
            raise FileNotFoundError(f"no dataset CSV found in store {store}")
        return candidates[0]
    if not store.exists():
        raise FileNotFoundError(f"store {store} does not exist")
    return store


def _load_store(store_path) -> tuple[Dataset, str]:
    path = resolve_store(store_path)
    try:
        read_metadata(path)
        ds = load_dataset(path)
    except StackIndexError:
        ds = None
    if ds is None:
        from .dataset import parse_dataset

        ds = parse_dataset(path.read_text(encoding="utf-8"))
    checksum = hashlib.sha256(path.read_bytes()).hexdigest()
    return ds, checksum


def _parse_month(value: str, name: str) -> MonthStamp:
    try:
        return MonthStamp.parse(value)
    except ValueError:
        raise ApiError(422, "invalid_request", f"{name} must be a YYYY-MM month, got {value!r}")


def _resolve_series(ds: Dataset, tags: list[str], do_combine: bool):
    if not tags:
        raise ApiError(422, "invalid_request", "tags must not be empty")
    if do_combine:
        if len(tags) < 2:
            raise ApiError(422, "invalid_request", "combine requires at least two tags")
        return combine(ds, tags)
    if len(tags) != 1:
        raise ApiError(422, "invalid_request", "exactly one tag required unless combine is set")
    return get_series(ds, tags[0])


def _check_forecast_params(model: str, horizon: int, level: float, config: dict | None):
    if model not in MODEL_KINDS:
        raise ApiError(422, "invalid_request",
                       f"model must be one of {', '.join(MODEL_KINDS)}, got {model!r}")
    if not (1 <= horizon <= MAX_HORIZON):
        raise ApiError(422, "invalid_request",
                       f"horizon must lie in 1..{MAX_HORIZON} months (forecasts are "
                       f"capped at 2 years), got {horizon}")
    if not (LEVEL_MIN <= level <= LEVEL_MAX):
        raise ApiError(422, "invalid_request",
                       f"level must lie in [{LEVEL_MIN}, {LEVEL_MAX}], got {level}")
    try:
        return resolve_model_config(model, config)
    except StackIndexError as exc:
        raise ApiError(422, "invalid_request", str(exc))


def create_app(store_path, cors_origin: str | None = None) -> FastAPI:
    """Build the service over the dataset stored at ``store_path``."""
    dataset, checksum = _load_store(store_path)
    cache = _ResponseCache()
    app = FastAPI(title="stackindex", docs_url=None, redoc_url=None)

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["GET", "POST"],
            allow_headers=["*"],
        )

    def _error_response(status: int, code: str, message: str, details: dict) -> JSONResponse:
        return JSONResponse(status_code=status,
                            content={"code": code, "message": message, "details": details})

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return _error_response(exc.status, exc.code, exc.message, exc.details)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_req: Request, exc: RequestValidationError):
        errors = exc.errors()
        first = errors[0] if errors else {}
        loc = ".".join(str(p) for p in first.get("loc", ()) if p != "body")
        message = f"invalid request body: {loc}: {first.get('msg', 'validation failed')}"
        return _error_response(422, "invalid_request", message,
                               {"errors": [{k: str(v) for k, v in e.items()} for e in errors]})

    @app.exception_handler(StackIndexError)
    async def _domain_error(_req: Request, exc: StackIndexError):
        if isinstance(exc, _NOT_FOUND):
            return _error_response(404, exc.code, str(exc), {})
        if isinstance(exc, _INVALID):
            return _error_response(422, exc.code, str(exc), {})
        return _error_response(500, exc.code, str(exc), {})

    def _with_checksum(payload: dict) -> dict:
        return {**payload, "dataset_checksum": checksum}

    def _cached(kind: str, request_payload: dict, compute):
        key = (checksum, kind, json.dumps(request_payload, sort_keys=True))
        hit = cache.get(key)
        if hit is not None:
            return hit
        value = _with_checksum(compute())
        cache.put(key, value)
        return value

    @app.get(f"{API_PREFIX}/health")
    def health():
        return {"status": "ok", "dataset_checksum": checksum}

    @app.get(f"{API_PREFIX}/tags")
    def tags():
        return _with_checksum(wire.tags_payload(dataset))

    @app.get(f"{API_PREFIX}/series/{{tag}}")
    def series(tag: str, from_: str | None = Query(None, alias="from"),
               to: str | None = Query(None)):
        s = get_series(dataset, tag)
        if from_ or to:
            start = _parse_month(from_, "from") if from_ else None
            end = _parse_month(to, "to") if to else None
            try:
                s = s.slice(start=start, end=end)
            except ValueError:
                raise ApiError(422, "invalid_request",
                               "from/to select an empty range of the series")
        return _with_checksum(wire.series_payload(s))

    @app.post(f"{API_PREFIX}/forecast")
    def forecast(req: ForecastRequest):
        config = _check_forecast_params(req.model, req.horizon, req.level, req.config)

        def compute():
            s = _resolve_series(dataset, req.tags, req.combine)
            fc = forecast_series(s, req.model, req.horizon, req.level, config)
            return wire.forecast_payload(s, fc)

        return _cached("forecast", req.model_dump(), compute)

    @app.get(f"{API_PREFIX}/changepoints/{{tag}}")
    def changepoints(tag: str, min_confidence: float = 0.9,
                     combine_with: str | None = Query(None, alias="combine")):
        if not (0.5 <= min_confidence < 1.0):
            raise ApiError(422, "invalid_request",
                           f"min_confidence must lie in [0.5, 1), got {min_confidence}")

        def compute():
            if combine_with:
                members = [tag] + [t for t in combine_with.split(",") if t]
                s = combine(dataset, members)
            else:
                s = get_series(dataset, tag)
            return wire.changepoint_payload(detect_changepoints(s, min_confidence))

        return _cached("changepoints",
                       {"tag": tag, "combine": combine_with, "min_confidence": min_confidence},
                       compute)

    @app.get(f"{API_PREFIX}/trending")
    def trending(window: int = 12, top: int = 10):
        if window < 1 or window > dataset.n_months:
            raise ApiError(422, "invalid_request",
                           f"window must lie in 1..{dataset.n_months} months, got {window}")
        if top < 1:
            raise ApiError(422, "invalid_request", f"top must be >= 1, got {top}")

        def compute():
            return wire.ranking_payload(trend_ranking(dataset, window, top))

        return _cached("trending", {"window": window, "top": top}, compute)

    @app.post(f"{API_PREFIX}/backtest")
    def backtest_endpoint(req: BacktestRequest):
        config = _check_forecast_params(req.model, 1, req.level, req.config)
        if not (1 <= req.holdout <= MAX_HORIZON):
            raise ApiError(422, "invalid_request",
                           f"holdout must lie in 1..{MAX_HORIZON} months, got {req.holdout}")

        def compute():
            s = _resolve_series(dataset, req.tags, req.combine)
            report = backtest_series(s, req.model, req.holdout, config, req.level)
            return wire.backtest_payload(report)

        return _cached("backtest", req.model_dump(), compute)

    return app


def serve(store_path, bind_address: str = "127.0.0.1:8000",
          cors_origin: str | None = None) -> None:
    """Run the service with uvicorn on ``host:port``."""
    import uvicorn

    host, _, port = bind_address.partition(":")
    app = create_app(store_path, cors_origin=cors_origin)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="info")
