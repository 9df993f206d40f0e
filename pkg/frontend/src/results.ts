/** Result rendering: scalar, entity list, or table, with pagination. */

import type { QueryResult } from "./types.js";

export interface ResultsCallbacks {
  openEntity(kind: string | null, key: string): void;
  goToPage(page: number): void;
}

export function renderResult(
  container: HTMLElement,
  result: QueryResult,
  cb: ResultsCallbacks,
): void {
  container.textContent = "";
  const doc = container.ownerDocument;

  if (result.kind === "scalar") {
    const value = doc.createElement("div");
    value.className = "scalar-value";
    value.textContent = String(result.value);
    container.appendChild(value);
    return;
  }

  const table = doc.createElement("table");
  table.className = "results-table";
  const head = doc.createElement("tr");
  const columns = result.kind === "entities" ? ["key", "label"] : result.columns;
  for (const c of columns) {
    const th = doc.createElement("th");
    th.textContent = c;
    head.appendChild(th);
  }
  table.appendChild(head);

  if (result.kind === "entities") {
    for (const item of result.items) {
      const tr = doc.createElement("tr");
      const keyCell = doc.createElement("td");
      keyCell.className = "key-cell";
      keyCell.textContent = item.key;
      tr.appendChild(keyCell);
      const labelCell = doc.createElement("td");
      const link = doc.createElement("a");
      link.textContent = item.label;
      link.href = "#";
      link.addEventListener("click", (ev) => {
        ev.preventDefault();
        cb.openEntity(result.entity_kind, item.key);
      });
      labelCell.appendChild(link);
      tr.appendChild(labelCell);
      table.appendChild(tr);
    }
  } else {
    for (const row of result.rows) {
      const tr = doc.createElement("tr");
      for (const cell of row) {
        const td = doc.createElement("td");
        td.textContent = cell === null || cell === undefined ? "" : String(cell);
        tr.appendChild(td);
      }
      table.appendChild(tr);
    }
  }
  container.appendChild(table);

  const pages = Math.max(1, Math.ceil(result.total / result.page_size));
  const bar = doc.createElement("div");
  bar.className = "pagination";

  const prev = doc.createElement("button");
  prev.textContent = "←";
  prev.disabled = result.page <= 1;
  prev.dataset.role = "prev-page";
  prev.addEventListener("click", () => cb.goToPage(result.page - 1));
  bar.appendChild(prev);

  const status = doc.createElement("span");
  status.dataset.role = "page-status";
  status.textContent = `page ${result.page} of ${pages} · ${result.total} total`;
  bar.appendChild(status);

  const next = doc.createElement("button");
  next.textContent = "→";
  next.disabled = result.page >= pages;
  next.dataset.role = "next-page";
  next.addEventListener("click", () => cb.goToPage(result.page + 1));
  bar.appendChild(next);

  container.appendChild(bar);
}
