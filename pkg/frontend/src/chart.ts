// SVG chart: history line, forecast line, shaded interval band, and
// change-point markers. Pure DOM construction so tests can inspect geometry.

import type { ChangePointPayload, ForecastPayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface ChartOptions {
    width?: number;
    height?: number;
    margin?: number;
}

interface Scale {
    x(monthIndex: number): number;
    y(value: number): number;
}

function monthIndex(month: string): number {
    const [year, m] = month.split("-").map(Number);
    return year * 12 + (m - 1);
}

function el(name: string, attrs: Record<string, string>): SVGElement {
    const node = document.createElementNS(SVG_NS, name);
    for (const [key, value] of Object.entries(attrs)) {
        node.setAttribute(key, value);
    }
    return node;
}

function pointPairs(xs: number[], ys: number[]): string {
    return xs.map((x, i) => `${x.toFixed(1)},${ys[i].toFixed(1)}`).join(" ");
}

export function renderChart(forecast: ForecastPayload,
                            changepoints: ChangePointPayload[],
                            options: ChartOptions = {}): SVGSVGElement {
    const width = options.width ?? 900;
    const height = options.height ?? 420;
    const margin = options.margin ?? 48;

    const histIdx = forecast.history.map((p) => monthIndex(p.month));
    const fcIdx = forecast.points.map((p) => monthIndex(p.month));
    const allIdx = [...histIdx, ...fcIdx];
    const values = [
        ...forecast.history.map((p) => p.value),
        ...forecast.points.flatMap((p) => [p.lower, p.yhat, p.upper]),
    ];
    const xLo = Math.min(...allIdx);
    const xHi = Math.max(...allIdx);
    const yLo = Math.min(0, ...values);
    const yHi = Math.max(...values);

    const scale: Scale = {
        x: (i) => margin + ((i - xLo) / Math.max(1, xHi - xLo)) * (width - 2 * margin),
        y: (v) => height - margin - ((v - yLo) / Math.max(1e-9, yHi - yLo)) * (height - 2 * margin),
    };

    const svg = el("svg", {
        viewBox: `0 0 ${width} ${height}`,
        width: String(width),
        height: String(height),
        class: "forecast-chart",
    }) as SVGSVGElement;

    // axes
    svg.appendChild(el("line", {
        x1: String(margin), y1: String(height - margin),
        x2: String(width - margin), y2: String(height - margin),
        class: "axis",
    }));
    svg.appendChild(el("line", {
        x1: String(margin), y1: String(margin),
        x2: String(margin), y2: String(height - margin),
        class: "axis",
    }));

    // interval band: forecast upper bound forward, lower bound back
    const bandX = fcIdx.map(scale.x);
    const upperY = forecast.points.map((p) => scale.y(p.upper));
    const lowerY = forecast.points.map((p) => scale.y(p.lower));
    const band = el("polygon", {
        class: "interval-band",
        points: `${pointPairs(bandX, upperY)} ${pointPairs([...bandX].reverse(), [...lowerY].reverse())}`,
    });
    svg.appendChild(band);

    svg.appendChild(el("polyline", {
        class: "history-line",
        fill: "none",
        points: pointPairs(histIdx.map(scale.x), forecast.history.map((p) => scale.y(p.value))),
    }));

    svg.appendChild(el("polyline", {
        class: "forecast-line",
        fill: "none",
        points: pointPairs(bandX, forecast.points.map((p) => scale.y(p.yhat))),
    }));

    for (const cp of changepoints) {
        const idx = monthIndex(cp.month);
        if (idx < xLo || idx > xHi) continue;
        const x = scale.x(idx);
        const marker = el("line", {
            class: "changepoint-marker",
            x1: x.toFixed(1), y1: String(margin),
            x2: x.toFixed(1), y2: String(height - margin),
        });
        marker.dataset.month = cp.month;
        marker.dataset.direction = cp.direction;
        svg.appendChild(marker);
        const label = el("text", {
            class: "changepoint-label",
            x: (x + 4).toFixed(1),
            y: String(margin + 12),
        });
        label.textContent = cp.month;
        svg.appendChild(label);
    }

    // extent labels
    const first = forecast.history[0]?.month ?? forecast.points[0].month;
    const last = forecast.points[forecast.points.length - 1].month;
    const startLabel = el("text", { class: "axis-label", x: String(margin), y: String(height - margin + 18) });
    startLabel.textContent = first;
    const endLabel = el("text", {
        class: "axis-label", "text-anchor": "end",
        x: String(width - margin), y: String(height - margin + 18),
    });
    endLabel.textContent = last;
    svg.appendChild(startLabel);
    svg.appendChild(endLabel);

    return svg;
}
