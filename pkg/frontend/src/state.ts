// Explorer state: every value a control can set, with clamping rules that
// make invalid states unreachable, plus URL (de)serialization for shareable
// links.

import type { BacktestRequest, ForecastRequest, ModelKind } from "./types.js";

export const MODEL_KINDS: ModelKind[] = ["additive", "holt-winters", "sarima", "ensemble"];

export const MAX_TAGS = 5;
export const MIN_HORIZON = 1;
export const MAX_HORIZON = 24; // the service rejects anything past 2 years
export const MIN_LEVEL = 0.5;
export const MAX_LEVEL = 0.99;
export const MIN_CONFIDENCE = 0.5;
export const MAX_CONFIDENCE = 0.99;

export interface ExplorerState {
    tags: string[];
    combine: boolean;
    model: ModelKind;
    horizon: number;
    level: number;
    minConfidence: number;
}

export function defaultState(): ExplorerState {
    return {
        tags: [],
        combine: false,
        model: "additive",
        horizon: 12,
        level: 0.8,
        minConfidence: 0.9,
    };
}

function clampNumber(value: number, lo: number, hi: number, fallback: number): number {
    if (!Number.isFinite(value)) return fallback;
    return Math.min(hi, Math.max(lo, value));
}

export function clampState(raw: Partial<ExplorerState>): ExplorerState {
    const base = defaultState();
    const tags = (raw.tags ?? base.tags)
        .map((t) => t.trim())
        .filter((t) => t.length > 0)
        .filter((t, i, all) => all.indexOf(t) === i)
        .slice(0, MAX_TAGS);
    const model = MODEL_KINDS.includes(raw.model as ModelKind)
        ? (raw.model as ModelKind)
        : base.model;
    return {
        tags,
        combine: Boolean(raw.combine) && tags.length >= 2,
        model,
        horizon: Math.round(clampNumber(raw.horizon ?? base.horizon,
            MIN_HORIZON, MAX_HORIZON, base.horizon)),
        level: clampNumber(raw.level ?? base.level, MIN_LEVEL, MAX_LEVEL, base.level),
        minConfidence: clampNumber(raw.minConfidence ?? base.minConfidence,
            MIN_CONFIDENCE, MAX_CONFIDENCE, base.minConfidence),
    };
}

export function encodeState(state: ExplorerState): string {
    const params = new URLSearchParams();
    if (state.tags.length) params.set("tags", state.tags.join(","));
    if (state.combine) params.set("combine", "1");
    params.set("model", state.model);
    params.set("horizon", String(state.horizon));
    params.set("level", String(state.level));
    params.set("conf", String(state.minConfidence));
    return params.toString();
}

export function decodeState(query: string): ExplorerState {
    const params = new URLSearchParams(query);
    const tags = params.get("tags");
    return clampState({
        tags: tags ? tags.split(",") : [],
        combine: params.get("combine") === "1",
        model: (params.get("model") ?? undefined) as ModelKind | undefined,
        horizon: params.has("horizon") ? Number(params.get("horizon")) : undefined,
        level: params.has("level") ? Number(params.get("level")) : undefined,
        minConfidence: params.has("conf") ? Number(params.get("conf")) : undefined,
    });
}

// Exact request mapping: what the chart panel sends for the current state.
export function forecastRequest(state: ExplorerState): ForecastRequest {
    return {
        tags: [...state.tags],
        combine: state.combine,
        model: state.model,
        horizon: state.horizon,
        level: state.level,
    };
}

// The backtest panel scores the same selection over a holdout equal to the
// chosen horizon (both are capped identically by the service).
export function backtestRequest(state: ExplorerState): BacktestRequest {
    return {
        tags: [...state.tags],
        combine: state.combine,
        model: state.model,
        holdout: state.horizon,
        level: state.level,
    };
}
