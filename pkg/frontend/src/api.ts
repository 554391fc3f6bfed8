// Typed client for the /api/v1 contract with per-slot in-flight
// cancellation and dataset-checksum staleness tracking.

import type {
    ApiErrorPayload,
    BacktestPayload,
    BacktestRequest,
    ChangePointsPayload,
    ForecastPayload,
    ForecastRequest,
    HealthPayload,
    TagsPayload,
    TrendingPayload,
} from "./types.js";

export class ApiError extends Error {
    readonly code: string;
    readonly status: number;

    constructor(status: number, payload: ApiErrorPayload) {
        super(payload.message || `request failed with status ${status}`);
        this.code = payload.code || "error";
        this.status = status;
    }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
    private readonly base: string;
    private readonly fetchFn: FetchLike;
    private readonly inflight = new Map<string, AbortController>();
    private checksum: string | null = null;

    /** Called when a response carries a different dataset checksum than the
     *  one seen earlier in the session (the store changed under us). */
    onDatasetChange: ((previous: string, current: string) => void) | null = null;

    constructor(base: string, fetchFn?: FetchLike) {
        this.base = base.replace(/\/$/, "");
        this.fetchFn = fetchFn ?? ((url, init) => globalThis.fetch(url, init));
    }

    get datasetChecksum(): string | null {
        return this.checksum;
    }

    /** Abort whatever request currently occupies `slot` (state changed). */
    cancel(slot: string): void {
        this.inflight.get(slot)?.abort();
        this.inflight.delete(slot);
    }

    private async request<T>(slot: string, path: string, init?: RequestInit): Promise<T> {
        this.cancel(slot);
        const controller = new AbortController();
        this.inflight.set(slot, controller);
        let response: Response;
        try {
            response = await this.fetchFn(`${this.base}/api/v1${path}`, {
                ...init,
                signal: controller.signal,
            });
        } finally {
            if (this.inflight.get(slot) === controller) this.inflight.delete(slot);
        }
        const body = await response.json();
        if (!response.ok) {
            throw new ApiError(response.status, body as ApiErrorPayload);
        }
        this.trackChecksum((body as { dataset_checksum?: string }).dataset_checksum);
        return body as T;
    }

    private trackChecksum(checksum: string | undefined): void {
        if (!checksum) return;
        if (this.checksum !== null && this.checksum !== checksum) {
            this.onDatasetChange?.(this.checksum, checksum);
        }
        this.checksum = checksum;
    }

    health(): Promise<HealthPayload> {
        return this.request("health", "/health");
    }

    tags(): Promise<TagsPayload> {
        return this.request("tags", "/tags");
    }

    forecast(req: ForecastRequest): Promise<ForecastPayload> {
        return this.request("forecast", "/forecast", {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(req),
        });
    }

    changepoints(tag: string, minConfidence: number,
                 combineWith: string[] = []): Promise<ChangePointsPayload> {
        const params = new URLSearchParams();
        params.set("min_confidence", String(minConfidence));
        if (combineWith.length) params.set("combine", combineWith.join(","));
        return this.request("changepoints",
            `/changepoints/${encodeURIComponent(tag)}?${params.toString()}`);
    }

    trending(windowMonths: number, top: number): Promise<TrendingPayload> {
        return this.request("trending", `/trending?window=${windowMonths}&top=${top}`);
    }

    backtest(req: BacktestRequest): Promise<BacktestPayload> {
        return this.request("backtest", "/backtest", {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(req),
        });
    }
}
