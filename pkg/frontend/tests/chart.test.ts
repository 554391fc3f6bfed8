import { describe, expect, it } from "vitest";

import { renderChart } from "../src/chart.js";
import type { ChangePointPayload, ForecastPayload } from "../src/types.js";

function month(offset: number): string {
    const year = 2018 + Math.floor(offset / 12);
    const m = (offset % 12) + 1;
    return `${year}-${String(m).padStart(2, "0")}`;
}

function fixture(historyN = 24, horizon = 12): ForecastPayload {
    return {
        tag: "keras+tensorflow+pytorch",
        origin: month(historyN - 1),
        horizon,
        level: 0.8,
        history: Array.from({ length: historyN }, (_, i) => ({
            month: month(i),
            value: 100 + 5 * i,
        })),
        points: Array.from({ length: horizon }, (_, i) => ({
            month: month(historyN + i),
            yhat: 220 + 5 * i,
            lower: 200 + 5 * i,
            upper: 240 + 5 * i,
        })),
        dataset_checksum: "abc",
    };
}

const MARKER: ChangePointPayload = {
    month: month(18),
    confidence: 1.0,
    direction: "up",
    pre_mean: 50,
    post_mean: 400,
};

function coordPairs(attr: string | null): Array<[number, number]> {
    return (attr ?? "").trim().split(/\s+/).map((pair) => {
        const [x, y] = pair.split(",").map(Number);
        return [x, y];
    });
}

describe("renderChart", () => {
    it("draws history and forecast lines with one vertex per month", () => {
        const svg = renderChart(fixture(), []);
        const history = coordPairs(svg.querySelector(".history-line")!.getAttribute("points"));
        const forecast = coordPairs(svg.querySelector(".forecast-line")!.getAttribute("points"));
        expect(history.length).toBe(24);
        expect(forecast.length).toBe(12);
        const lastHistoryX = history[history.length - 1][0];
        expect(forecast[0][0]).toBeGreaterThan(lastHistoryX);
    });

    it("draws the interval band as a closed ribbon of upper+lower vertices", () => {
        const svg = renderChart(fixture(), []);
        const band = coordPairs(svg.querySelector(".interval-band")!.getAttribute("points"));
        expect(band.length).toBe(24); // 12 upper forward + 12 lower reversed
        const upper = band.slice(0, 12);
        const lower = band.slice(12).reverse();
        for (let i = 0; i < 12; i++) {
            expect(upper[i][0]).toBeCloseTo(lower[i][0], 5); // same month column
            // SVG y grows downward: the upper bound sits above the lower one
            expect(upper[i][1]).toBeLessThan(lower[i][1]);
        }
    });

    it("renders a change-point marker at the reported month", () => {
        const svg = renderChart(fixture(), [MARKER]);
        const marker = svg.querySelector<SVGLineElement>(".changepoint-marker");
        expect(marker).not.toBeNull();
        expect(marker!.dataset.month).toBe(MARKER.month);
        expect(marker!.dataset.direction).toBe("up");
        const label = svg.querySelector(".changepoint-label");
        expect(label!.textContent).toBe(MARKER.month);

        // marker x sits strictly inside the plot area at the right month
        const x = Number(marker!.getAttribute("x1"));
        const history = coordPairs(svg.querySelector(".history-line")!.getAttribute("points"));
        expect(x).toBeGreaterThan(history[17][0] - 1e-6);
        expect(x).toBeLessThan(history[19][0] + 1e-6);
    });

    it("skips markers outside the charted range", () => {
        const svg = renderChart(fixture(), [{ ...MARKER, month: "2005-01" }]);
        expect(svg.querySelector(".changepoint-marker")).toBeNull();
    });

    it("labels the time extent with first and last months", () => {
        const svg = renderChart(fixture(), []);
        const labels = [...svg.querySelectorAll(".axis-label")].map((n) => n.textContent);
        expect(labels).toEqual([month(0), month(35)]);
    });
});
