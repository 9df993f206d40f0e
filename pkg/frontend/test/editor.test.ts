/** Editor logic without any network: chips, spans, stale-response discard. */

import { Window } from "happy-dom";
import { describe, expect, it } from "vitest";

import {
  SuggestionStream,
  applyChip,
  byteSpanToChars,
  chipInsertion,
  renderChips,
  renderDiagnostic,
} from "../src/editor.js";
import { CATEGORY_COLORS } from "../src/theme.js";
import type { SuggestResponse } from "../src/types.js";

const document = new Window().document as unknown as Document;

describe("chip application", () => {
  it("appends the token plus one trailing space", () => {
    expect(applyChip("", "PERSONS")).toBe("PERSONS ");
    expect(applyChip("PERSONS ", "NAMED")).toBe("PERSONS NAMED ");
  });

  it("single-spaces even when the text lacks a trailing space", () => {
    expect(applyChip("PERSONS", "NAMED")).toBe("PERSONS NAMED ");
  });

  it("turns placeholders into editable stand-ins", () => {
    expect(chipInsertion('"STRING"')).toEqual({ text: '""', cursorBack: 1 });
    expect(chipInsertion("NUMBER")).toEqual({ text: "2", cursorBack: 0 });
    expect(applyChip("PERSONS NAMED ", '"STRING"')).toBe('PERSONS NAMED "" ');
  });

  it("keeps multi-word operators intact", () => {
    expect(applyChip("PERSONS NAMED \"x\" ", "AND NOT")).toBe(
      'PERSONS NAMED "x" AND NOT ',
    );
  });
});

describe("stale response discard", () => {
  it("drops a slow response once a newer request exists", async () => {
    const pending = new Map<string, (r: SuggestResponse) => void>();
    const stream = new SuggestionStream(
      (q) => new Promise((resolvePromise) => pending.set(q, resolvePromise)),
    );
    const respFor = (token: string): SuggestResponse => ({
      suggestions: [{ token, category: "filter" }],
      complete: false,
      diagnostic: null,
    });

    const first = stream.fetch("PERS");
    const second = stream.fetch("PERSONS");
    pending.get("PERSONS")!(respFor("NAMED"));
    pending.get("PERS")!(respFor("WRONG"));

    expect(await first).toBeNull();
    expect((await second)?.suggestions[0]?.token).toBe("NAMED");
  });

  it("applies responses that stay newest", async () => {
    const stream = new SuggestionStream(async () => ({
      suggestions: [],
      complete: true,
      diagnostic: null,
    }));
    expect(await stream.fetch("PERSONS")).not.toBeNull();
  });
});

describe("chip rendering", () => {
  it("colours every chip from the fixed category palette", () => {
    const host = document.createElement("div");
    const seen: string[] = [];
    renderChips(
      host,
      [
        { token: "PERSONS", category: "base_concept" },
        { token: "NAMED", category: "filter" },
        { token: "~", category: "operator" },
      ],
      (token) => seen.push(token),
    );
    const chips = [...host.querySelectorAll("button")];
    expect(chips.map((c) => c.textContent)).toEqual(["PERSONS", "NAMED", "~"]);
    expect(chips[0]!.style.backgroundColor).not.toBe("");
    expect(chips.map((c) => c.dataset.category)).toEqual([
      "base_concept",
      "filter",
      "operator",
    ]);
    chips[1]!.click();
    expect(seen).toEqual(["NAMED"]);
  });

  it("has one colour per category and no more", () => {
    expect(Object.keys(CATEGORY_COLORS)).toHaveLength(6);
    expect(new Set(Object.values(CATEGORY_COLORS)).size).toBe(6);
  });
});

describe("diagnostic rendering", () => {
  it("highlights the byte span in the query text", () => {
    const host = document.createElement("div");
    renderDiagnostic(host, 'PUBLICATIONS NAMED "x"', {
      code: "syntax_error",
      message: "unexpected NAMED",
      span: [13, 18],
    });
    expect(host.hidden).toBe(false);
    expect(host.querySelector(".diag-message")?.textContent).toContain("unexpected");
    expect(host.querySelector("mark")?.textContent).toBe("NAMED");
  });

  it("converts byte offsets for multibyte text", () => {
    // é is two bytes, so byte 4 is char 3
    expect(byteSpanToChars('"é" PERSONS', [0, 4])).toEqual([0, 3]);
    expect(byteSpanToChars('"é" PERSONS', [5, 12])).toEqual([4, 11]);
    expect(byteSpanToChars("ABC", [1, 2])).toEqual([1, 2]);
    expect(byteSpanToChars("ABC", [3, 3])).toEqual([3, 3]);
  });

  it("clears when the diagnostic is gone", () => {
    const host = document.createElement("div");
    renderDiagnostic(host, "PERSONS NAMED", {
      code: "syntax_error",
      message: "unexpected end of query",
      span: [13, 13],
    });
    renderDiagnostic(host, "PERSONS", null);
    expect(host.hidden).toBe(true);
    expect(host.textContent).toBe("");
  });
});
