/**
 * Result and detail rendering, driven by live service payloads so the
 * DOM contract is checked against what the API actually sends.
 */

import { Window } from "happy-dom";
import { beforeAll, describe, expect, inject, it } from "vitest";

import { ApiError, getEntity, postQuery, setApiBase } from "../src/api.js";
import type { DetailCallbacks } from "../src/detail.js";
import { renderDetail } from "../src/detail.js";
import { renderResult } from "../src/results.js";
import type { EntitiesResult, TableResult } from "../src/types.js";

const ANNA = "homepages/a/AnnaArndt";
const MARCO = "homepages/m/MarcoRossi";
const P3 = "conf/jcdl/ArndtRossi20";
const JCDL = "conf/jcdl";
const TRIER = "inst/trier";

beforeAll(() => setApiBase(inject("apiBase")));

function container(): HTMLElement {
  const doc = new Window().document as unknown as Document;
  return doc.createElement("div");
}

function noop(): DetailCallbacks {
  return { openEntity: () => {}, openPublication: () => {} };
}

describe("renderResult", () => {
  it("renders an entity list with one link per item", async () => {
    const resp = await postQuery('PUBLICATIONS APPEARED IN "JCDL"');
    const result = resp.result as EntitiesResult;
    const el = container();
    const opened: Array<[string | null, string]> = [];
    renderResult(el, result, {
      openEntity: (kind, key) => opened.push([kind, key]),
      goToPage: () => {},
    });

    const headers = [...el.querySelectorAll("th")].map((th) => th.textContent);
    expect(headers).toEqual(["key", "label"]);
    const keys = [...el.querySelectorAll("td.key-cell")].map((td) => td.textContent);
    expect(keys).toEqual(result.items.map((i) => i.key));

    const firstLink = el.querySelector("td a") as HTMLElement;
    expect(firstLink.textContent).toBe(result.items[0]!.label);
    firstLink.click();
    expect(opened).toEqual([["publication", result.items[0]!.key]]);
  });

  it("renders a scalar as one value", async () => {
    const resp = await postQuery("COUNT (PERSONS)");
    const el = container();
    renderResult(el, resp.result, { openEntity: () => {}, goToPage: () => {} });
    expect(el.querySelector(".scalar-value")?.textContent).toBe("5");
  });

  it("renders table results with the payload columns", async () => {
    const resp = await postQuery('CORE RANKS FOR "Anna-Lena Arndt"');
    const result = resp.result as TableResult;
    expect(result.columns).toEqual(["rank", "count"]);
    const el = container();
    renderResult(el, result, { openEntity: () => {}, goToPage: () => {} });
    const cells = [...el.querySelectorAll("td")].map((td) => td.textContent);
    expect(cells).toEqual(["A*", "2"]);
  });

  it("pages through a cursor with the edge buttons disabled", async () => {
    const first = await postQuery("PUBLICATIONS", 1, 2);
    const el = container();
    const wanted: number[] = [];
    renderResult(el, first.result, {
      openEntity: () => {},
      goToPage: (p) => wanted.push(p),
    });
    expect(el.querySelector('[data-role="page-status"]')?.textContent).toBe(
      "page 1 of 3 · 6 total",
    );
    const prev = el.querySelector('[data-role="prev-page"]') as HTMLButtonElement;
    const next = el.querySelector('[data-role="next-page"]') as HTMLButtonElement;
    expect(prev.disabled).toBe(true);
    expect(next.disabled).toBe(false);
    next.click();
    expect(wanted).toEqual([2]);

    const last = await postQuery("PUBLICATIONS", 3, 2);
    renderResult(el, last.result, { openEntity: () => {}, goToPage: () => {} });
    const next2 = el.querySelector('[data-role="next-page"]') as HTMLButtonElement;
    expect(next2.disabled).toBe(true);
  });
});

describe("renderDetail", () => {
  it("gives a person both chart slots", async () => {
    const detail = await getEntity("person", ANNA);
    const el = container();
    const slots = renderDetail(el, detail, noop());
    expect(slots.ego).not.toBeNull();
    expect(slots.bowtie).not.toBeNull();
    expect(slots.ego!.querySelector("h3")?.textContent).toBe("Co-authors");
    const pubs = [...el.querySelectorAll("section")].find((s) =>
      s.querySelector("h3")?.textContent?.startsWith("publications"),
    );
    expect(pubs?.dataset["total"]).toBe("3");
  });

  it("links a publication to its venue and authors", async () => {
    const detail = await getEntity("publication", P3);
    const el = container();
    const opened: Array<[string, string]> = [];
    const slots = renderDetail(el, detail, {
      openEntity: (kind, key) => opened.push([kind, key]),
      openPublication: () => {},
    });
    expect(slots.ego).toBeNull();
    expect(slots.bowtie).not.toBeNull();

    const sections = [...el.querySelectorAll("section")];
    const byTitle = (prefix: string) =>
      sections.find((s) => s.querySelector("h3")?.textContent?.startsWith(prefix));

    const venueLink = byTitle("venue")?.querySelector("a") as HTMLElement;
    venueLink.click();
    expect(opened).toEqual([["conference", JCDL]]);

    const authorLabels = [...byTitle("authors")!.querySelectorAll("li")].map(
      (li) => li.textContent,
    );
    expect(authorLabels).toEqual(["Anna-Lena Arndt", "Marco Rossi"]);
    expect(byTitle("references")?.dataset["total"]).toBe("2");
    expect(byTitle("citations")?.dataset["total"]).toBe("3");
  });

  it("gives an institution no chart slots and links its members", async () => {
    const detail = await getEntity("institution", TRIER);
    const el = container();
    const opened: Array<[string, string]> = [];
    const slots = renderDetail(el, detail, {
      openEntity: (kind, key) => opened.push([kind, key]),
      openPublication: () => {},
    });
    expect(slots.ego).toBeNull();
    expect(slots.bowtie).toBeNull();
    expect(el.querySelector(".ego-slot")).toBeNull();
    expect(el.querySelector(".bowtie-slot")).toBeNull();

    const memberLink = el.querySelector("section a") as HTMLElement;
    memberLink.click();
    expect(opened[0]![0]).toBe("person");
  });

  it("shows a venue with its CORE rank", async () => {
    const detail = await getEntity("conference", JCDL);
    const el = container();
    const slots = renderDetail(el, detail, noop());
    expect(slots.ego).toBeNull();
    expect(slots.bowtie).not.toBeNull();
    const dds = [...el.querySelectorAll("dd")].map((dd) => dd.textContent);
    expect(dds).toContain("A*");
  });

  it("keeps unlinked author names plain", async () => {
    const detail = await getEntity("person", MARCO);
    expect(detail.kind).toBe("person");
    const el = container();
    renderDetail(el, detail, noop());
    expect(el.querySelector("h2")?.textContent).toBe("Marco Rossi");
  });
});

describe("api error pass-through", () => {
  it("maps unknown entities to 404", async () => {
    const err = await getEntity("publication", "nope/missing").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
    expect(err.body.code).toBe("not_found");
  });

  it("carries semantic rejections with their code", async () => {
    const err = await postQuery("~3 PERSONS").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(422);
    expect(err.body.code).toBe("semantic_error");
  });

  it("keeps the span and expected set on syntax errors", async () => {
    const err = await postQuery("PERSONS NAMED").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(422);
    expect(err.body.code).toBe("syntax_error");
    expect(err.body.span).toEqual([13, 13]);
    expect(err.body.expected).toContain('"STRING"');
  });
});
