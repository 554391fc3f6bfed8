import { describe, expect, it } from "vitest";

import {
    MAX_HORIZON,
    MAX_TAGS,
    backtestRequest,
    clampState,
    decodeState,
    defaultState,
    encodeState,
    forecastRequest,
} from "../src/state.js";

describe("clampState", () => {
    it("caps the horizon at 24 months", () => {
        expect(clampState({ horizon: 36 }).horizon).toBe(MAX_HORIZON);
        expect(clampState({ horizon: 0 }).horizon).toBe(1);
        expect(clampState({ horizon: 12.7 }).horizon).toBe(13);
    });

    it("keeps at most five tags, deduplicated", () => {
        const state = clampState({ tags: ["a", "b", "a", "c", "d", "e", "f"] });
        expect(state.tags).toEqual(["a", "b", "c", "d", "e"]);
        expect(state.tags.length).toBe(MAX_TAGS);
    });

    it("drops blank tags", () => {
        expect(clampState({ tags: [" ", "", "python "] }).tags).toEqual(["python"]);
    });

    it("disables combine below two tags", () => {
        expect(clampState({ tags: ["a"], combine: true }).combine).toBe(false);
        expect(clampState({ tags: ["a", "b"], combine: true }).combine).toBe(true);
    });

    it("rejects unknown models", () => {
        expect(clampState({ model: "lstm" as never }).model).toBe("additive");
        expect(clampState({ model: "sarima" }).model).toBe("sarima");
    });

    it("clamps level and confidence into their ranges", () => {
        expect(clampState({ level: 0.1 }).level).toBe(0.5);
        expect(clampState({ level: 1.5 }).level).toBe(0.99);
        expect(clampState({ minConfidence: 0.2 }).minConfidence).toBe(0.5);
        expect(clampState({ minConfidence: 1 }).minConfidence).toBe(0.99);
    });

    it("falls back to defaults on non-finite numbers", () => {
        expect(clampState({ horizon: Number.NaN }).horizon).toBe(defaultState().horizon);
    });
});

describe("URL round-trip", () => {
    it("encode then decode yields an identical state", () => {
        const states = [
            defaultState(),
            clampState({ tags: ["python"], model: "sarima", horizon: 24, level: 0.95 }),
            clampState({
                tags: ["keras", "tensorflow", "pytorch"],
                combine: true,
                model: "ensemble",
                horizon: 6,
                level: 0.5,
                minConfidence: 0.75,
            }),
        ];
        for (const state of states) {
            expect(decodeState(encodeState(state))).toEqual(state);
        }
    });

    it("decoding garbage falls back to a valid state", () => {
        const state = decodeState("?horizon=999&model=magic&tags=a,b,c,d,e,f,g&level=7");
        expect(state.horizon).toBe(MAX_HORIZON);
        expect(state.model).toBe("additive");
        expect(state.tags.length).toBe(MAX_TAGS);
        expect(state.level).toBe(0.99);
    });

    it("handles tags with plus signs and dots", () => {
        const state = clampState({ tags: ["c++", "node.js"] });
        expect(decodeState(encodeState(state)).tags).toEqual(["c++", "node.js"]);
    });
});

describe("request mapping", () => {
    it("maps every control onto the forecast request exactly", () => {
        const state = clampState({
            tags: ["keras", "tensorflow"],
            combine: true,
            model: "sarima",
            horizon: 18,
            level: 0.9,
            minConfidence: 0.8,
        });
        expect(forecastRequest(state)).toEqual({
            tags: ["keras", "tensorflow"],
            combine: true,
            model: "sarima",
            horizon: 18,
            level: 0.9,
        });
    });

    it("maps the backtest request with holdout = horizon", () => {
        const state = clampState({ tags: ["python"], model: "additive", horizon: 8 });
        expect(backtestRequest(state)).toEqual({
            tags: ["python"],
            combine: false,
            model: "additive",
            holdout: 8,
            level: 0.8,
        });
    });

    it("copies tags defensively", () => {
        const state = clampState({ tags: ["python"] });
        const request = forecastRequest(state);
        request.tags.push("mutated");
        expect(state.tags).toEqual(["python"]);
    });
});
