/**
 * Chip-walk property against the live service: starting from an empty
 * editor and clicking any sequence of offered chips, the editor never
 * reaches a dead state — no chips to click and text that does not parse.
 */

import { beforeAll, expect, inject, it } from "vitest";

import { getSuggest, setApiBase } from "../src/api.js";
import { applyChip } from "../src/editor.js";

beforeAll(() => setApiBase(inject("apiBase")));

/** Deterministic small RNG so a failure reproduces. */
function mulberry32(seed: number): () => number {
  let a = seed;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

it("200 scripted chip walks never dead-end", async () => {
  const rng = mulberry32(425809);
  for (let walk = 0; walk < 200; walk++) {
    let text = "";
    const steps = 3 + Math.floor(rng() * 8);
    for (let step = 0; step < steps; step++) {
      const resp = await getSuggest(text);
      const dead = resp.suggestions.length === 0 && !resp.complete;
      expect(dead, `dead end after ${JSON.stringify(text)}`).toBe(false);
      if (resp.suggestions.length === 0) break; // complete, nothing to add
      const pick = resp.suggestions[Math.floor(rng() * resp.suggestions.length)]!;
      text = applyChip(text, pick.token);
    }
    // wherever the walk stopped, the editor must still be usable
    const final = await getSuggest(text);
    expect(final.suggestions.length > 0 || final.complete).toBe(true);
  }
}, 180_000);
