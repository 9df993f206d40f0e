/**
 * Thin typed client over the HTTP API. All paths are relative so the
 * page works from any origin that proxies /api to the service.
 */
export class ApiError extends Error {
    status;
    body;
    constructor(status, body) {
        super(body.message);
        this.status = status;
        this.body = body;
    }
}
let base = "";
/** Point the client somewhere else (tests talk straight to the service). */
export function setApiBase(url) {
    base = url.replace(/\/$/, "");
}
async function request(path, init) {
    const resp = await fetch(base + path, init);
    const body = await resp.json();
    if (!resp.ok) {
        throw new ApiError(resp.status, body);
    }
    return body;
}
export function postQuery(query, page = 1, pageSize = 50) {
    return request("/api/query", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ query, page, page_size: pageSize }),
    });
}
export function getSuggest(q) {
    return request(`/api/suggest?q=${encodeURIComponent(q)}`);
}
export function getEntity(kind, key) {
    return request(`/api/entity/${kind}/${encodeKey(key)}`);
}
export function getEgo(key, k = 10) {
    return request(`/api/ego/${encodeKey(key)}?k=${k}`);
}
export function getBowtie(kind, key) {
    return request(`/api/bowtie/${kind}/${encodeKey(key)}`);
}
/** Keys are slash-separated paths; keep the slashes, escape the rest. */
function encodeKey(key) {
    return key.split("/").map(encodeURIComponent).join("/");
}
