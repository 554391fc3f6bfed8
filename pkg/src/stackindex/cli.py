"""Operator command line: ingest, forecast, backtest, changepoints, top,
plot, serve.

Data goes to stdout, diagnostics to stderr. Usage errors exit 2 (click's
default); domain errors exit 1 with the error code printed.
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

import click

from . import wire
from .changepoint import detect_changepoints
from .dataset import MonthStamp, combine as combine_series, get_series, parse_dataset
from .errors import StackIndexError
from .evaluation import BACKTEST_CSV_HEADER, backtest_series, trend_ranking
from .ingestion import (
    FetchSpec,
    RequestsTransport,
    fetch_tag_counts,
    load_dataset,
    read_metadata,
    save_dataset,
)
from .models import MODEL_KINDS, forecast_series
from .service import ENV_BIND, ENV_CORS, ENV_STORE, serve
from .svgplot import render_forecast_svg


def _fail(exc: StackIndexError) -> None:
    click.echo(f"error [{exc.code}]: {exc}", err=True)
    sys.exit(1)


def _read_dataset(path: str):
    """Load with checksum verification when a sidecar exists, else parse."""
    p = Path(path)
    try:
        if Path(str(p) + ".meta").exists():
            return load_dataset(p)
        return parse_dataset(p.read_text(encoding="utf-8"))
    except OSError as exc:
        click.echo(f"error [io_error]: {exc}", err=True)
        sys.exit(1)
    except StackIndexError as exc:
        _fail(exc)


def _emit_json(payload: dict, data_path: str) -> None:
    """Print the API response shape: payload plus the dataset checksum."""
    checksum = hashlib.sha256(Path(data_path).read_bytes()).hexdigest()
    click.echo(json.dumps({**payload, "dataset_checksum": checksum},
                          indent=2, sort_keys=True))


def _series_for(ds, tag: str, combine_with: str | None):
    if combine_with:
        members = [tag] + [t.strip() for t in combine_with.split(",") if t.strip()]
        return combine_series(ds, members)
    return get_series(ds, tag)


def _month(value: str, label: str) -> MonthStamp:
    try:
        return MonthStamp.parse(value)
    except ValueError:
        raise click.UsageError(f"{label} must be YYYY-MM, got {value!r}")


@click.group()
def main():
    """Technology-trend forecasting over monthly tag counts."""


@main.command()
@click.option("--tags", help="Comma-separated tag list to fetch live.")
@click.option("--from", "from_", metavar="YYYY-MM", help="First month of the range.")
@click.option("--to", metavar="YYYY-MM", help="Last month of the range.")
@click.option("--site", default="stackoverflow", show_default=True)
@click.option("--csv", "csv_file", type=click.Path(exists=True, dir_okay=False),
              help="Import a local CSV instead of fetching.")
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Destination dataset CSV (sidecar written alongside).")
def ingest(tags, from_, to, site, csv_file, out):
    """Fetch tag counts from the Stack Exchange API or import a CSV."""
    try:
        if csv_file:
            ds = parse_dataset(Path(csv_file).read_text(encoding="utf-8"))
            save_dataset(ds, out, site=site)
        else:
            if not (tags and from_ and to):
                raise click.UsageError("either --csv or all of --tags/--from/--to are required")
            spec = FetchSpec(
                tags=tuple(t.strip() for t in tags.split(",") if t.strip()),
                from_month=_month(from_, "--from"),
                to_month=_month(to, "--to"),
                site=site,
            )
            ds = fetch_tag_counts(spec, RequestsTransport())
            save_dataset(ds, out, site=site)
    except StackIndexError as exc:
        _fail(exc)
    click.echo(f"wrote {ds.n_months}x{ds.n_tags} dataset to {out}", err=True)


@main.command()
@click.option("--data", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--tag", required=True)
@click.option("--combine", "combine_with", metavar="T2,T3",
              help="Additional tags summed into the series.")
@click.option("--model", type=click.Choice(MODEL_KINDS), default="additive",
              show_default=True)
@click.option("--horizon", type=int, default=12, show_default=True)
@click.option("--level", type=float, default=0.8, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Emit the API response shape.")
@click.option("--csv", "as_csv", is_flag=True, help="Emit forecast points as CSV.")
def forecast(data, tag, combine_with, model, horizon, level, as_json, as_csv):
    """Forecast a tag (or combination) over a monthly horizon."""
    ds = _read_dataset(data)
    try:
        series = _series_for(ds, tag, combine_with)
        fc = forecast_series(series, model, horizon, level)
    except StackIndexError as exc:
        _fail(exc)
    payload = wire.forecast_payload(series, fc)
    if as_json:
        _emit_json(payload, data)
    elif as_csv:
        click.echo("month,yhat,lower,upper")
        for p in payload["points"]:
            click.echo(f"{p['month']},{p['yhat']!r},{p['lower']!r},{p['upper']!r}")
    else:
        click.echo(f"{series.tag}: {model} forecast, origin {fc.origin}, "
                   f"level {fc.level:.2f}")
        for p in fc.points:
            click.echo(f"  {p.month}  {p.yhat:12.2f}  [{p.lower:.2f}, {p.upper:.2f}]")


@main.command()
@click.option("--data", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--tag", required=True)
@click.option("--combine", "combine_with", metavar="T2,T3")
@click.option("--model", type=click.Choice(MODEL_KINDS), default="additive",
              show_default=True)
@click.option("--holdout", type=int, default=12, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.option("--csv", "as_csv", is_flag=True)
def backtest(data, tag, combine_with, model, holdout, as_json, as_csv):
    """Holdout backtest; prints a metric row (MAE, MSE, RMSE, cumulative)."""
    ds = _read_dataset(data)
    try:
        series = _series_for(ds, tag, combine_with)
        report = backtest_series(series, model, holdout)
    except StackIndexError as exc:
        _fail(exc)
    if as_json:
        _emit_json(wire.backtest_payload(report), data)
        return
    if as_csv:
        click.echo(BACKTEST_CSV_HEADER)
        click.echo(report.csv_row())
        return
    m = report.metrics
    click.echo(f"tag={report.tag} model={report.model} split={report.split_month} "
               f"holdout={report.holdout}")
    click.echo(f"  mae={m.mae:.2f} mse={m.mse:.2f} rmse={m.rmse:.2f} "
               f"cum_abs_err={m.cumulative_abs_error:.2f} "
               f"cum_rel_err={m.cumulative_rel_error:.4f}")


@main.command()
@click.option("--data", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--tag", required=True)
@click.option("--combine", "combine_with", metavar="T2,T3")
@click.option("--min-confidence", type=float, default=0.9, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def changepoints(data, tag, combine_with, min_confidence, as_json):
    """Detect months where the series' mean level shifts."""
    ds = _read_dataset(data)
    try:
        series = _series_for(ds, tag, combine_with)
        points = detect_changepoints(series, min_confidence)
    except StackIndexError as exc:
        _fail(exc)
    if as_json:
        _emit_json(wire.changepoint_payload(points), data)
        return
    if not points:
        click.echo(f"{series.tag}: no change points at confidence >= {min_confidence}")
        return
    for p in points:
        click.echo(f"{series.tag}: {p.month} {p.direction} confidence={p.confidence:.3f} "
                   f"pre_mean={p.pre_mean:.1f} post_mean={p.post_mean:.1f}")


@main.command()
@click.option("--data", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--window", type=int, default=None,
              help="Ranking window in months [default: full range].")
@click.option("--n", "top_n", type=int, default=10, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def top(data, window, top_n, as_json):
    """Rank tags by mean monthly count over the window."""
    ds = _read_dataset(data)
    try:
        ranking = trend_ranking(ds, window or ds.n_months, top_n)
    except StackIndexError as exc:
        _fail(exc)
    if as_json:
        _emit_json(wire.ranking_payload(ranking), data)
        return
    for tag, score in ranking.entries:
        click.echo(f"{tag}\t{score:.2f}")


@main.command()
@click.option("--data", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--tag", required=True)
@click.option("--combine", "combine_with", metavar="T2,T3")
@click.option("--model", type=click.Choice(MODEL_KINDS), default="additive",
              show_default=True)
@click.option("--horizon", type=int, default=12, show_default=True)
@click.option("--level", type=float, default=0.8, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def plot(data, tag, combine_with, model, horizon, level, out):
    """Export an SVG of history, forecast, interval band, change points."""
    ds = _read_dataset(data)
    try:
        series = _series_for(ds, tag, combine_with)
        fc = forecast_series(series, model, horizon, level)
        points = detect_changepoints(series, 0.9)
    except StackIndexError as exc:
        _fail(exc)
    svg = render_forecast_svg(series, fc, points, title=f"{series.tag} ({model})")
    Path(out).write_text(svg, encoding="utf-8")
    click.echo(f"wrote {out}", err=True)


@main.command(name="serve")
@click.option("--store", envvar=ENV_STORE, required=True,
              type=click.Path(exists=True), help=f"Dataset CSV or directory [env: {ENV_STORE}]")
@click.option("--bind", envvar=ENV_BIND, default="127.0.0.1:8000", show_default=True,
              help=f"host:port [env: {ENV_BIND}]")
@click.option("--cors-origin", envvar=ENV_CORS, default=None,
              help=f"Allowed UI origin [env: {ENV_CORS}]")
def serve_cmd(store, bind, cors_origin):
    """Run the HTTP JSON API over a stored dataset."""
    try:
        serve(store, bind, cors_origin)
    except StackIndexError as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
