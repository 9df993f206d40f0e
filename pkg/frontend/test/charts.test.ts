/**
 * Chart rendering against live payloads. The contract under test: every
 * label in the SVG is the payload value verbatim (no client-side math on
 * totals), and ego distance is rank-based, inversely monotone in count.
 */

import { Window } from "happy-dom";
import { beforeAll, describe, expect, inject, it } from "vitest";

import { ApiError, getBowtie, getEgo, setApiBase } from "../src/api.js";
import { renderBowtie } from "../src/charts/bowtie.js";
import { renderEgo, ringRadii } from "../src/charts/ego.js";
import type { BowtieBucket } from "../src/types.js";

const WEI = "homepages/w/WeiWang";
const ANNA = "homepages/a/AnnaArndt";
const LOTTE = "homepages/l/LotteWeber";
const P3 = "conf/jcdl/ArndtRossi20";
const JCDL = "conf/jcdl";
const TRIER = "inst/trier";

const doc = new Window().document as unknown as Document;

beforeAll(() => setApiBase(inject("apiBase")));

describe("ringRadii", () => {
  it("puts a single count on the innermost ring", () => {
    expect(ringRadii([2, 2, 2])).toEqual(new Map([[2, 70]]));
  });

  it("spreads distinct counts evenly, higher counts inward", () => {
    const radii = ringRadii([1, 3, 2, 3]);
    expect(radii.get(3)).toBe(70);
    expect(radii.get(2)).toBe(127.5);
    expect(radii.get(1)).toBe(185);
  });
});

describe("ego chart", () => {
  it("renders neighbors in payload order with payload labels", async () => {
    const payload = await getEgo(WEI);
    const svg = renderEgo(doc, payload);
    const nodes = [...svg.querySelectorAll("g.ego-neighbor")];
    expect(nodes.map((n) => n.getAttribute("data-key"))).toEqual(
      payload.neighbors.map((n) => n.key),
    );
    nodes.forEach((node, i) => {
      const nb = payload.neighbors[i]!;
      expect(node.getAttribute("data-count")).toBe(String(nb.count));
      expect(node.querySelector("text")?.textContent).toBe(`${nb.name} (${nb.count})`);
    });
    expect(svg.querySelector(".ego-center-label")?.textContent).toBe(
      payload.center.name,
    );
  });

  it("keeps distance inversely monotone in count", async () => {
    const payload = await getEgo(ANNA);
    expect(payload.neighbors.length).toBeGreaterThan(1);
    const svg = renderEgo(doc, payload);
    const nodes = [...svg.querySelectorAll("g.ego-neighbor")].map((n) => ({
      count: Number(n.getAttribute("data-count")),
      distance: Number(n.getAttribute("data-distance")),
    }));
    for (const a of nodes) {
      for (const b of nodes) {
        if (a.count > b.count) expect(a.distance).toBeLessThan(b.distance);
        if (a.count === b.count) expect(a.distance).toBe(b.distance);
      }
    }
  });

  it("renders an isolated author as hub only", async () => {
    const payload = await getEgo(LOTTE);
    expect(payload.neighbors).toEqual([]);
    const svg = renderEgo(doc, payload);
    expect(svg.querySelectorAll("g.ego-neighbor").length).toBe(0);
    expect(svg.querySelector(".ego-center")).not.toBeNull();
  });
});

describe("bowtie chart", () => {
  function checkSide(svg: SVGSVGElement, side: string, buckets: BowtieBucket[]) {
    const segs = [...svg.querySelectorAll(`g.bowtie-segment[data-side="${side}"]`)];
    expect(segs.length).toBe(buckets.length);
    segs.forEach((seg, i) => {
      const bucket = buckets[i]!;
      expect(seg.getAttribute("data-offset")).toBe(String(bucket.offset));
      expect(seg.getAttribute("data-count")).toBe(String(bucket.count));
      expect(seg.querySelector("text.bowtie-count")?.textContent).toBe(
        String(bucket.count),
      );
      expect(seg.querySelector("text.bowtie-age")?.textContent).toBe(
        `${bucket.offset}y`,
      );
    });
  }

  const subjects: Array<[string, string, string]> = [
    ["publication", "publication", P3],
    ["person", "person", WEI],
    ["conference", "conference", JCDL],
  ];

  it.each(subjects)("labels the %s chart straight from the payload", async (_n, kind, key) => {
    const payload = await getBowtie(kind, key);
    const svg = renderBowtie(doc, payload);
    checkSide(svg, "references", payload.reference_buckets);
    checkSide(svg, "citations", payload.citation_buckets);
    expect(svg.querySelector('[data-role="references-total"]')?.textContent).toBe(
      `${payload.totals.references} references`,
    );
    expect(svg.querySelector('[data-role="citations-total"]')?.textContent).toBe(
      `${payload.totals.citations} citations`,
    );
  });

  it("totals equal the sum of their buckets on fixture data", async () => {
    const payload = await getBowtie("publication", P3);
    const sum = (buckets: BowtieBucket[]) => buckets.reduce((s, b) => s + b.count, 0);
    expect(sum(payload.reference_buckets)).toBe(payload.totals.references);
    expect(sum(payload.citation_buckets)).toBe(payload.totals.citations);
  });

  it("surfaces the service rejection for institutions", async () => {
    const err = await getBowtie("institution", TRIER).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(422);
    expect(err.body.code).toBe("semantic_error");
  });
});
