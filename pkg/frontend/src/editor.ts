/**
 * Query editor logic, kept free of page wiring so tests can drive it.
 *
 * Suggestions arrive asynchronously; SuggestionStream stamps every
 * request with a sequence number and drops any response that is no
 * longer the newest, so the chips always describe the current text.
 */

import { colorFor } from "./theme.js";
import type { Diagnostic, Suggestion, SuggestResponse } from "./types.js";

export class SuggestionStream {
  private issued = 0;

  constructor(private fetchFn: (q: string) => Promise<SuggestResponse>) {}

  /** Resolves to the response, or null if a newer request superseded it. */
  async fetch(text: string): Promise<SuggestResponse | null> {
    const id = ++this.issued;
    const resp = await this.fetchFn(text);
    return id === this.issued ? resp : null;
  }
}

/** What clicking a chip inserts; placeholders get editable stand-ins. */
export function chipInsertion(token: string): { text: string; cursorBack: number } {
  if (token === '"STRING"') {
    return { text: '""', cursorBack: 1 }; // land between the quotes
  }
  if (token === "NUMBER") {
    return { text: "2", cursorBack: 0 };
  }
  return { text: token, cursorBack: 0 };
}

/** Append a chip's insertion plus a trailing space, single-spaced. */
export function applyChip(text: string, token: string): string {
  const sep = text === "" || text.endsWith(" ") ? "" : " ";
  return text + sep + chipInsertion(token).text + " ";
}

export function renderChips(
  container: HTMLElement,
  suggestions: Suggestion[],
  onClick: (token: string) => void,
): void {
  container.textContent = "";
  for (const s of suggestions) {
    const chip = container.ownerDocument.createElement("button");
    chip.type = "button";
    chip.className = "chip";
    chip.textContent = s.token;
    chip.dataset.category = s.category;
    chip.style.backgroundColor = colorFor(s.category);
    chip.title = s.category.replace("_", " ");
    chip.addEventListener("click", () => onClick(s.token));
    container.appendChild(chip);
  }
}

/** Byte span (UTF-8 offsets, as the API reports) to JS string indices. */
export function byteSpanToChars(text: string, span: [number, number]): [number, number] {
  const enc = new TextEncoder();
  let bytes = 0;
  let start = text.length;
  let end = text.length;
  for (let i = 0; i < text.length; ) {
    const cp = text.codePointAt(i)!;
    const chars = cp > 0xffff ? 2 : 1;
    if (bytes >= span[0] && start === text.length) start = i;
    if (bytes >= span[1]) {
      end = i;
      break;
    }
    bytes += enc.encode(String.fromCodePoint(cp)).length;
    i += chars;
  }
  if (bytes >= span[0] && start === text.length) start = text.length;
  if (span[1] > bytes) end = text.length;
  return [start, Math.max(end, start)];
}

/** Show a diagnostic inline, highlighting the offending span. */
export function renderDiagnostic(
  container: HTMLElement,
  text: string,
  diagnostic: Diagnostic | null,
): void {
  container.textContent = "";
  if (diagnostic === null) {
    container.hidden = true;
    return;
  }
  container.hidden = false;
  const doc = container.ownerDocument;
  const msg = doc.createElement("div");
  msg.className = "diag-message";
  msg.textContent = `${diagnostic.code}: ${diagnostic.message}`;
  container.appendChild(msg);
  if (diagnostic.span && text !== "") {
    const [s, e] = byteSpanToChars(text, diagnostic.span);
    const line = doc.createElement("pre");
    line.className = "diag-source";
    line.appendChild(doc.createTextNode(text.slice(0, s)));
    const mark = doc.createElement("mark");
    mark.textContent = text.slice(s, e) || "‸"; // caret for empty spans
    line.appendChild(mark);
    line.appendChild(doc.createTextNode(text.slice(e)));
    container.appendChild(line);
  }
}
