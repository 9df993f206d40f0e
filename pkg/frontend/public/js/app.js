/**
 * Page wiring: a hash router over two views — the query editor with its
 * suggestion chips and results, and entity detail pages with charts.
 */
import { ApiError, getBowtie, getEgo, getEntity, getSuggest, postQuery } from "./api.js";
import { renderBowtie } from "./charts/bowtie.js";
import { renderEgo } from "./charts/ego.js";
import { renderDetail } from "./detail.js";
import { SuggestionStream, applyChip, chipInsertion, renderChips, renderDiagnostic } from "./editor.js";
import { renderResult } from "./results.js";
import { showToast } from "./toast.js";
const doc = document;
const state = { page: 1, lastRun: null };
const stream = new SuggestionStream(getSuggest);
function el(id) {
    const found = doc.getElementById(id);
    if (!found)
        throw new Error(`missing #${id}`);
    return found;
}
function openEntity(kind, key) {
    if (kind === null)
        return;
    if (kind === "keyword") {
        // keywords have no detail page; show their publications instead
        const input = el("query-input");
        input.value = `PUBLICATIONS ABOUT "${key}"`;
        location.hash = "#/";
        void runQuery(1);
        return;
    }
    location.hash = `#/entity/${kind}/${key}`;
}
async function refreshChips() {
    const input = el("query-input");
    const text = input.value;
    try {
        const resp = await stream.fetch(text);
        if (resp === null)
            return; // superseded by a newer request
        renderChips(el("chips"), resp.suggestions, clickChip);
        renderDiagnostic(el("diagnostic"), text, resp.diagnostic);
        el("run-button").disabled = !resp.complete;
    }
    catch {
        showToast(doc, "suggestion service unreachable; you can keep typing");
    }
}
function clickChip(token) {
    const input = el("query-input");
    const insertion = chipInsertion(token);
    input.value = applyChip(input.value, token);
    const pos = insertion.cursorBack > 0
        ? input.value.length - 1 - insertion.cursorBack
        : input.value.length;
    input.focus();
    input.setSelectionRange(pos, pos);
    void refreshChips();
}
async function runQuery(page) {
    const input = el("query-input");
    const text = input.value.trim();
    if (text === "")
        return;
    state.page = page;
    state.lastRun = text;
    const results = el("results");
    try {
        const resp = await postQuery(text, page);
        renderDiagnostic(el("diagnostic"), text, resp.diagnostics[0] ?? null);
        renderResult(results, resp.result, {
            openEntity,
            goToPage: (p) => void runQuery(p),
        });
        const timing = resp.timing;
        el("timing").textContent = `parse ${timing.parse_ms.toFixed(1)} ms · evaluate ${timing.evaluate_ms.toFixed(1)} ms`;
    }
    catch (err) {
        if (err instanceof ApiError && err.status === 422) {
            renderDiagnostic(el("diagnostic"), text, err.body);
            results.textContent = "";
        }
        else {
            showToast(doc, "query failed: service unreachable");
        }
    }
}
async function showDetail(kind, key) {
    const view = el("detail-view");
    view.textContent = "";
    let detail;
    try {
        detail = await getEntity(kind, key);
    }
    catch (err) {
        if (err instanceof ApiError && err.status === 404) {
            const missing = doc.createElement("div");
            missing.className = "not-found";
            missing.innerHTML = "<h2>not found</h2>";
            missing.appendChild(doc.createTextNode(`no ${kind} with key ${key}`));
            view.appendChild(missing);
            return;
        }
        showToast(doc, "detail request failed");
        return;
    }
    const slots = renderDetail(view, detail, {
        openEntity,
        openPublication: (k) => openEntity("publication", k),
    });
    if (slots.ego) {
        const slot = slots.ego;
        try {
            const ego = await getEgo(key);
            if (ego.neighbors.length === 0) {
                const empty = doc.createElement("p");
                empty.className = "chart-empty";
                empty.textContent = "no co-authored publications";
                slot.appendChild(empty);
            }
            else {
                slot.appendChild(renderEgo(doc, ego));
            }
        }
        catch {
            showToast(doc, "co-author chart unavailable");
        }
    }
    if (slots.bowtie) {
        const slot = slots.bowtie;
        try {
            slot.appendChild(renderBowtie(doc, await getBowtie(kind, key)));
        }
        catch {
            showToast(doc, "citation chart unavailable");
        }
    }
}
function route() {
    const hash = location.hash;
    const queryView = el("query-view");
    const detailView = el("detail-view");
    const m = hash.match(/^#\/entity\/([a-z]+)\/(.+)$/);
    if (m) {
        queryView.hidden = true;
        detailView.hidden = false;
        void showDetail(m[1], decodeURIComponent(m[2]));
    }
    else {
        detailView.hidden = true;
        queryView.hidden = false;
    }
}
export function start() {
    const input = el("query-input");
    input.addEventListener("input", () => void refreshChips());
    input.addEventListener("keydown", (ev) => {
        if (ev.key === "Enter")
            void runQuery(1);
    });
    el("run-button").addEventListener("click", () => void runQuery(1));
    window.addEventListener("hashchange", route);
    route();
    void refreshChips();
}
start();
