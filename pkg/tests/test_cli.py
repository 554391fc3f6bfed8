from __future__ import annotations

import json

import numpy as np
import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from stackindex.cli import main
from stackindex.dataset import MonthStamp, parse_dataset
from stackindex.ingestion import read_metadata, save_dataset
from stackindex.service import create_app

from conftest import CORPUS_PATH


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def linear_csv(tmp_path):
    lines = ["month,lin"]
    start = MonthStamp(2015, 1)
    for i in range(60):
        lines.append(f"{start.add(i)},{3 * i}")
    path = tmp_path / "linear.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture()
def seasonal_csv(tmp_path):
    rng = np.random.default_rng(200)
    lines = ["month,wave"]
    start = MonthStamp(2014, 1)
    for i in range(72):
        v = 120 + 1.5 * i + 12 * np.sin(2 * np.pi * i / 12) + rng.normal(0, 2)
        lines.append(f"{start.add(i)},{max(0.0, v):.1f}")
    path = tmp_path / "wave.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_top_n1_prints_python_first(runner):
    result = runner.invoke(main, ["top", "--data", str(CORPUS_PATH), "--n", "1"])
    assert result.exit_code == 0
    assert result.output.split("\t")[0] == "python"


def test_backtest_exactly_learnable_row(runner, linear_csv):
    result = runner.invoke(main, [
        "backtest", "--data", str(linear_csv), "--tag", "lin",
        "--model", "additive", "--holdout", "6", "--csv"])
    assert result.exit_code == 0
    header, row = result.output.strip().splitlines()
    assert header == "tag,model,split_month,holdout,mae,mse,rmse,cum_abs_err,cum_rel_err"
    mae = float(row.split(",")[4])
    assert mae < 1e-4


def test_forecast_horizon_36_exits_1_citing_cap(runner, linear_csv):
    result = runner.invoke(main, [
        "forecast", "--data", str(linear_csv), "--tag", "lin", "--horizon", "36"])
    assert result.exit_code == 1
    assert "horizon_too_large" in result.output
    assert "24" in result.output


def test_unknown_tag_exits_1_with_code(runner, linear_csv):
    result = runner.invoke(main, [
        "forecast", "--data", str(linear_csv), "--tag", "nope"])
    assert result.exit_code == 1
    assert "tag_not_found" in result.output


def test_usage_error_exits_2(runner):
    result = runner.invoke(main, ["forecast", "--tag", "x"])
    assert result.exit_code == 2


def test_unknown_model_rejected_by_usage(runner, linear_csv):
    result = runner.invoke(main, [
        "forecast", "--data", str(linear_csv), "--tag", "lin", "--model", "lstm"])
    assert result.exit_code == 2


def test_forecast_json_matches_api_response(runner, seasonal_csv, tmp_path):
    # persist a store so CLI and service read the identical artifact
    store = tmp_path / "store.csv"
    save_dataset(parse_dataset(seasonal_csv.read_text()), store)

    result = runner.invoke(main, [
        "forecast", "--data", str(store), "--tag", "wave",
        "--model", "additive", "--horizon", "6", "--level", "0.9", "--json"])
    assert result.exit_code == 0
    cli_payload = json.loads(result.output)

    client = TestClient(create_app(store))
    api_payload = client.post("/api/v1/forecast", json={
        "tags": ["wave"], "model": "additive", "horizon": 6, "level": 0.9}).json()
    assert cli_payload == api_payload


def test_top_json_matches_api_response(runner, seasonal_csv, tmp_path):
    store = tmp_path / "store.csv"
    save_dataset(parse_dataset(seasonal_csv.read_text()), store)
    result = runner.invoke(main, [
        "top", "--data", str(store), "--window", "12", "--n", "1", "--json"])
    cli_payload = json.loads(result.output)
    client = TestClient(create_app(store))
    api_payload = client.get("/api/v1/trending?window=12&top=1").json()
    assert cli_payload == api_payload


def test_backtest_json_matches_api_response(runner, seasonal_csv, tmp_path):
    store = tmp_path / "store.csv"
    save_dataset(parse_dataset(seasonal_csv.read_text()), store)
    result = runner.invoke(main, [
        "backtest", "--data", str(store), "--tag", "wave",
        "--model", "additive", "--holdout", "6", "--json"])
    cli_payload = json.loads(result.output)
    client = TestClient(create_app(store))
    api_payload = client.post("/api/v1/backtest", json={
        "tags": ["wave"], "model": "additive", "holdout": 6}).json()
    assert cli_payload == api_payload


def test_changepoints_json_matches_api_response(runner, tmp_path):
    lines = ["month,step"]
    start = MonthStamp(2014, 1)
    for i in range(48):
        lines.append(f"{start.add(i)},{0 if i < 24 else 100}")
    store = tmp_path / "store.csv"
    save_dataset(parse_dataset("\n".join(lines) + "\n"), store)
    runner_result = runner.invoke(main, [
        "changepoints", "--data", str(store), "--tag", "step",
        "--min-confidence", "0.95", "--json"])
    cli_payload = json.loads(runner_result.output)
    client = TestClient(create_app(store))
    api_payload = client.get("/api/v1/changepoints/step?min_confidence=0.95").json()
    assert cli_payload == api_payload


def test_forecast_csv_bit_stable(runner, seasonal_csv):
    args = ["forecast", "--data", str(seasonal_csv), "--tag", "wave",
            "--model", "holt-winters", "--horizon", "6", "--csv"]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.exit_code == 0
    assert first.output == second.output
    assert first.output.splitlines()[0] == "month,yhat,lower,upper"


def test_ingest_csv_import_writes_canonical_store(runner, seasonal_csv, tmp_path):
    out = tmp_path / "imported.csv"
    result = runner.invoke(main, [
        "ingest", "--csv", str(seasonal_csv), "--out", str(out)])
    assert result.exit_code == 0
    assert out.exists()
    meta = read_metadata(out)
    assert meta.tags == ("wave",)
    ds = parse_dataset(out.read_text())
    assert ds.n_months == 72


def test_ingest_requires_source(runner, tmp_path):
    result = runner.invoke(main, ["ingest", "--out", str(tmp_path / "x.csv")])
    assert result.exit_code == 2


def test_combine_flag_sums_members(runner, tmp_path):
    lines = ["month,a,b"]
    start = MonthStamp(2015, 1)
    for i in range(48):
        lines.append(f"{start.add(i)},{10 + i},{5}")
    data = tmp_path / "two.csv"
    data.write_text("\n".join(lines) + "\n", encoding="utf-8")
    result = runner.invoke(main, [
        "forecast", "--data", str(data), "--tag", "a", "--combine", "b",
        "--model", "additive", "--horizon", "3", "--json"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["tag"] == "a+b"


def test_plot_writes_svg(runner, seasonal_csv, tmp_path):
    out = tmp_path / "fig.svg"
    result = runner.invoke(main, [
        "plot", "--data", str(seasonal_csv), "--tag", "wave",
        "--model", "additive", "--horizon", "12", "--out", str(out)])
    assert result.exit_code == 0
    svg = out.read_text()
    assert svg.startswith("<svg")
    assert "<polyline" in svg and "<polygon" in svg


def test_plot_deterministic(runner, seasonal_csv, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for out in (a, b):
        result = runner.invoke(main, [
            "plot", "--data", str(seasonal_csv), "--tag", "wave",
            "--model", "additive", "--horizon", "6", "--out", str(out)])
        assert result.exit_code == 0
    assert a.read_bytes() == b.read_bytes()
