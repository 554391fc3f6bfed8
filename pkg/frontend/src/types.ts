// Wire types mirroring the /api/v1 JSON contract. The UI renders these
// verbatim; it never derives forecast numbers of its own.

export type ModelKind = "additive" | "holt-winters" | "sarima" | "ensemble";

export interface SeriesPoint {
    month: string; // YYYY-MM
    value: number;
}

export interface ForecastPoint {
    month: string;
    yhat: number;
    lower: number;
    upper: number;
}

export interface ForecastRequest {
    tags: string[];
    combine: boolean;
    model: ModelKind;
    horizon: number;
    level: number;
}

export interface ForecastPayload {
    tag: string;
    origin: string;
    horizon: number;
    level: number;
    history: SeriesPoint[];
    points: ForecastPoint[];
    dataset_checksum: string;
}

export interface ChangePointPayload {
    month: string;
    confidence: number;
    direction: "up" | "down";
    pre_mean: number;
    post_mean: number;
}

export interface ChangePointsPayload {
    changepoints: ChangePointPayload[];
    dataset_checksum: string;
}

export interface TagsPayload {
    tags: string[];
    from: string;
    to: string;
    months: number;
    dataset_checksum: string;
}

export interface TrendingEntry {
    tag: string;
    score: number;
}

export interface TrendingPayload {
    window_months: number;
    entries: TrendingEntry[];
    dataset_checksum: string;
}

export interface BacktestRequest {
    tags: string[];
    combine: boolean;
    model: ModelKind;
    holdout: number;
    level: number;
}

export interface MetricsPayload {
    mae: number;
    mse: number;
    rmse: number;
    cumulative_predicted: number;
    cumulative_actual: number;
    cumulative_abs_error: number;
    cumulative_rel_error: number | null;
    n: number;
}

export interface BacktestPayload {
    tag: string;
    model: string;
    split_month: string;
    holdout: number;
    metrics: MetricsPayload;
    residuals: number[];
    dataset_checksum: string;
}

export interface HealthPayload {
    status: string;
    dataset_checksum: string;
}

export interface ApiErrorPayload {
    code: string;
    message: string;
    details: Record<string, unknown>;
}
