// Control builders. Each control clamps at the DOM level (slider min/max,
// disabled checkboxes) so the state machine never sees an invalid value.

import {
    ExplorerState,
    MAX_HORIZON,
    MAX_TAGS,
    MIN_HORIZON,
    MODEL_KINDS,
    clampState,
} from "./state.js";

export type StateListener = (next: ExplorerState) => void;

export function buildModelSelect(state: ExplorerState, onChange: StateListener): HTMLSelectElement {
    const select = document.createElement("select");
    select.id = "model-select";
    for (const kind of MODEL_KINDS) {
        const option = document.createElement("option");
        option.value = kind;
        option.textContent = kind;
        select.appendChild(option);
    }
    select.value = state.model;
    select.addEventListener("change", () => {
        onChange(clampState({ ...state, model: select.value as ExplorerState["model"] }));
    });
    return select;
}

export function buildHorizonSlider(state: ExplorerState, onChange: StateListener): HTMLInputElement {
    const slider = document.createElement("input");
    slider.type = "range";
    slider.id = "horizon-slider";
    slider.min = String(MIN_HORIZON);
    slider.max = String(MAX_HORIZON);
    slider.step = "1";
    slider.value = String(state.horizon);
    slider.addEventListener("change", () => {
        onChange(clampState({ ...state, horizon: Number(slider.value) }));
    });
    return slider;
}

export function buildLevelSelect(state: ExplorerState, onChange: StateListener): HTMLSelectElement {
    const select = document.createElement("select");
    select.id = "level-select";
    for (const level of [0.5, 0.8, 0.9, 0.95, 0.99]) {
        const option = document.createElement("option");
        option.value = String(level);
        option.textContent = `${Math.round(level * 100)}%`;
        select.appendChild(option);
    }
    select.value = String(state.level);
    select.addEventListener("change", () => {
        onChange(clampState({ ...state, level: Number(select.value) }));
    });
    return select;
}

export function buildConfidenceSlider(state: ExplorerState, onChange: StateListener): HTMLInputElement {
    const slider = document.createElement("input");
    slider.type = "range";
    slider.id = "confidence-slider";
    slider.min = "0.5";
    slider.max = "0.99";
    slider.step = "0.01";
    slider.value = String(state.minConfidence);
    slider.addEventListener("change", () => {
        onChange(clampState({ ...state, minConfidence: Number(slider.value) }));
    });
    return slider;
}

export function buildCombineToggle(state: ExplorerState, onChange: StateListener): HTMLInputElement {
    const toggle = document.createElement("input");
    toggle.type = "checkbox";
    toggle.id = "combine-toggle";
    toggle.checked = state.combine;
    toggle.disabled = state.tags.length < 2;
    toggle.addEventListener("change", () => {
        onChange(clampState({ ...state, combine: toggle.checked }));
    });
    return toggle;
}

export interface TagPicker {
    root: HTMLElement;
    setQuery(query: string): void;
}

export function buildTagPicker(allTags: string[], state: ExplorerState,
                               onChange: StateListener): TagPicker {
    const root = document.createElement("div");
    root.className = "tag-picker";

    const search = document.createElement("input");
    search.type = "search";
    search.id = "tag-search";
    search.placeholder = "filter tags";
    root.appendChild(search);

    const list = document.createElement("ul");
    list.className = "tag-list";
    root.appendChild(list);

    const selected = new Set(state.tags);

    function renderList(query: string): void {
        list.textContent = "";
        const needle = query.trim().toLowerCase();
        const matches = allTags.filter((t) => !needle || t.toLowerCase().includes(needle));
        for (const tag of matches.slice(0, 200)) {
            const item = document.createElement("li");
            const box = document.createElement("input");
            box.type = "checkbox";
            box.value = tag;
            box.checked = selected.has(tag);
            box.disabled = !box.checked && selected.size >= MAX_TAGS;
            box.addEventListener("change", () => {
                if (box.checked) selected.add(tag);
                else selected.delete(tag);
                onChange(clampState({ ...state, tags: [...selected] }));
            });
            const label = document.createElement("label");
            label.appendChild(box);
            label.appendChild(document.createTextNode(tag));
            item.appendChild(label);
            list.appendChild(item);
        }
    }

    search.addEventListener("input", () => renderList(search.value));
    renderList("");
    return { root, setQuery: (q) => { search.value = q; renderList(q); } };
}
