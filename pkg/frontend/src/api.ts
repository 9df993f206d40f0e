/**
 * Thin typed client over the HTTP API. All paths are relative so the
 * page works from any origin that proxies /api to the service.
 */

import type {
  BowtieResponse,
  Diagnostic,
  EgoResponse,
  EntityDetail,
  QueryResponse,
  SuggestResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: Diagnostic,
  ) {
    super(body.message);
  }
}

let base = "";

/** Point the client somewhere else (tests talk straight to the service). */
export function setApiBase(url: string): void {
  base = url.replace(/\/$/, "");
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(base + path, init);
  const body = await resp.json();
  if (!resp.ok) {
    throw new ApiError(resp.status, body as Diagnostic);
  }
  return body as T;
}

export function postQuery(
  query: string,
  page = 1,
  pageSize = 50,
): Promise<QueryResponse> {
  return request("/api/query", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ query, page, page_size: pageSize }),
  });
}

export function getSuggest(q: string): Promise<SuggestResponse> {
  return request(`/api/suggest?q=${encodeURIComponent(q)}`);
}

export function getEntity(kind: string, key: string): Promise<EntityDetail> {
  return request(`/api/entity/${kind}/${encodeKey(key)}`);
}

export function getEgo(key: string, k = 10): Promise<EgoResponse> {
  return request(`/api/ego/${encodeKey(key)}?k=${k}`);
}

export function getBowtie(kind: string, key: string): Promise<BowtieResponse> {
  return request(`/api/bowtie/${kind}/${encodeKey(key)}`);
}

/** Keys are slash-separated paths; keep the slashes, escape the rest. */
function encodeKey(key: string): string {
  return key.split("/").map(encodeURIComponent).join("/");
}
