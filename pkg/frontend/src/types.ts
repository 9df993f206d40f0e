/** Shapes of the HTTP API payloads this client consumes. */

export interface Suggestion {
  token: string;
  category: string;
}

export interface Diagnostic {
  code: string;
  message: string;
  span?: [number, number];
  expected?: string[];
}

export interface SuggestResponse {
  suggestions: Suggestion[];
  complete: boolean;
  diagnostic: Diagnostic | null;
}

export interface EntityItem {
  key: string;
  label: string;
}

export interface EntitiesResult {
  kind: "entities";
  entity_kind: string | null;
  total: number;
  page: number;
  page_size: number;
  items: EntityItem[];
}

export interface TableResult {
  kind: "table";
  columns: string[];
  total: number;
  page: number;
  page_size: number;
  rows: unknown[][];
}

export interface ScalarResult {
  kind: "scalar";
  value: unknown;
}

export type QueryResult = EntitiesResult | TableResult | ScalarResult;

export interface QueryResponse {
  result: QueryResult;
  diagnostics: Diagnostic[];
  timing: { parse_ms: number; lower_ms: number; evaluate_ms: number };
}

export interface Capped<T> {
  total: number;
  items: T[];
}

export interface PubRow {
  key: string;
  title: string;
  year: number | null;
  type: string;
}

export interface Ref {
  key: string | null;
  label: string;
}

export interface EgoResponse {
  center: { key: string; name: string };
  neighbors: { key: string; name: string; count: number }[];
}

export interface BowtieBucket {
  offset: number;
  count: number;
}

export interface BowtieResponse {
  subject: { kind: string; key: string; label: string; anchor_year: number | null };
  reference_buckets: BowtieBucket[];
  citation_buckets: BowtieBucket[];
  totals: { references: number; citations: number };
}

export type EntityDetail = Record<string, unknown> & { kind: string; key: string };
