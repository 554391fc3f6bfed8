// Application wiring: load state from the URL, render controls and views,
// re-query the API on every state change, and keep the URL shareable.

import { ApiClient, ApiError } from "./api.js";
import { renderChart } from "./chart.js";
import {
    buildCombineToggle,
    buildConfidenceSlider,
    buildHorizonSlider,
    buildLevelSelect,
    buildModelSelect,
    buildTagPicker,
} from "./controls.js";
import {
    ExplorerState,
    backtestRequest,
    decodeState,
    encodeState,
    forecastRequest,
} from "./state.js";
import type { BacktestPayload, TrendingPayload } from "./types.js";

declare global {
    interface Window {
        STACKINDEX_API_BASE?: string;
    }
}

function mount(id: string): HTMLElement {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing mount point #${id}`);
    return node;
}

function showError(target: HTMLElement, error: unknown): void {
    if (error instanceof DOMException && error.name === "AbortError") return;
    const box = document.createElement("p");
    box.className = "error-message";
    box.textContent = error instanceof ApiError
        ? `${error.message} [${error.code}]`
        : `request failed: ${String(error)}`;
    target.textContent = "";
    target.appendChild(box);
}

function metricsRow(report: BacktestPayload): HTMLElement {
    const table = document.createElement("table");
    table.className = "metrics-table";
    const head = table.insertRow();
    const body = table.insertRow();
    const cells: Array<[string, string]> = [
        ["tag", report.tag],
        ["model", report.model],
        ["split", report.split_month],
        ["holdout", String(report.holdout)],
        ["MAE", report.metrics.mae.toFixed(2)],
        ["MSE", report.metrics.mse.toFixed(2)],
        ["RMSE", report.metrics.rmse.toFixed(2)],
        ["cum. abs err", report.metrics.cumulative_abs_error.toFixed(2)],
        ["cum. rel err", report.metrics.cumulative_rel_error?.toFixed(4) ?? "n/a"],
    ];
    for (const [name, value] of cells) {
        head.insertCell().textContent = name;
        body.insertCell().textContent = value;
    }
    return table;
}

function trendingTable(payload: TrendingPayload,
                       onPick: (tag: string) => void): HTMLElement {
    const table = document.createElement("table");
    table.className = "trending-table";
    const head = table.insertRow();
    for (const name of ["#", "tag", "mean monthly questions"]) {
        head.insertCell().textContent = name;
    }
    payload.entries.forEach((entry, i) => {
        const row = table.insertRow();
        row.insertCell().textContent = String(i + 1);
        const tagCell = row.insertCell();
        const link = document.createElement("a");
        link.href = "#";
        link.textContent = entry.tag;
        link.addEventListener("click", (event) => {
            event.preventDefault();
            onPick(entry.tag);
        });
        tagCell.appendChild(link);
        row.insertCell().textContent = entry.score.toFixed(1);
    });
    return table;
}

export async function startApp(): Promise<void> {
    const api = new ApiClient(window.STACKINDEX_API_BASE ?? "");
    const banner = mount("banner");
    const controlsBox = mount("controls");
    const chartBox = mount("chart");
    const backtestBox = mount("backtest");
    const trendingBox = mount("trending");

    api.onDatasetChange = () => {
        banner.textContent =
            "The dataset changed on the server; numbers on screen may be stale. Reload to resync.";
        banner.className = "stale-banner";
    };

    try {
        await api.health();
    } catch (error) {
        showError(banner, error);
        return;
    }

    const tagsPayload = await api.tags();
    let state = decodeState(window.location.search);

    function syncUrl(): void {
        const query = encodeState(state);
        window.history.replaceState(null, "", query ? `?${query}` : window.location.pathname);
    }

    async function refreshChart(): Promise<void> {
        if (!state.tags.length) {
            chartBox.textContent = "Pick a technology tag to see its forecast.";
            backtestBox.textContent = "";
            return;
        }
        try {
            const forecast = await api.forecast(forecastRequest(state));
            const [primary, ...rest] = state.tags;
            const cps = await api.changepoints(
                primary, state.minConfidence, state.combine ? rest : []);
            chartBox.textContent = "";
            chartBox.appendChild(renderChart(forecast, cps.changepoints));
        } catch (error) {
            showError(chartBox, error);
            return;
        }
        try {
            const report = await api.backtest(backtestRequest(state));
            backtestBox.textContent = "";
            backtestBox.appendChild(metricsRow(report));
        } catch (error) {
            showError(backtestBox, error);
        }
    }

    function renderControls(): void {
        controlsBox.textContent = "";
        const picker = buildTagPicker(tagsPayload.tags, state, update);
        controlsBox.appendChild(picker.root);

        const row = document.createElement("div");
        row.className = "control-row";
        const addLabeled = (text: string, node: HTMLElement) => {
            const label = document.createElement("label");
            label.appendChild(document.createTextNode(text));
            label.appendChild(node);
            row.appendChild(label);
        };
        addLabeled("combine", buildCombineToggle(state, update));
        addLabeled("model", buildModelSelect(state, update));
        addLabeled(`horizon (months)`, buildHorizonSlider(state, update));
        addLabeled("interval", buildLevelSelect(state, update));
        addLabeled("min change-point confidence", buildConfidenceSlider(state, update));
        controlsBox.appendChild(row);
    }

    function update(next: ExplorerState): void {
        state = next;
        syncUrl();
        renderControls();
        void refreshChart();
    }

    async function refreshTrending(): Promise<void> {
        try {
            const payload = await api.trending(12, 10);
            trendingBox.textContent = "";
            trendingBox.appendChild(trendingTable(payload, (tag) => {
                update({ ...state, tags: [tag], combine: false });
            }));
        } catch (error) {
            showError(trendingBox, error);
        }
    }

    renderControls();
    syncUrl();
    void refreshChart();
    void refreshTrending();
}

if (typeof document !== "undefined" && document.getElementById("controls")) {
    void startApp();
}
