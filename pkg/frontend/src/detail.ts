/**
 * Entity detail pages. This module renders the data it is handed and
 * returns chart slots; fetching stays in the app layer so the pages are
 * testable with plain payload objects.
 */

import type { Capped, EntityDetail, EntityItem, PubRow, Ref } from "./types.js";

export interface DetailCallbacks {
  openEntity(kind: string, key: string): void;
  openPublication(key: string): void;
}

export interface ChartSlots {
  ego: HTMLElement | null;
  bowtie: HTMLElement | null;
}

export function renderDetail(
  container: HTMLElement,
  detail: EntityDetail,
  cb: DetailCallbacks,
): ChartSlots {
  container.textContent = "";
  const doc = container.ownerDocument;
  const add = (el: HTMLElement) => container.appendChild(el);

  const heading = doc.createElement("h2");
  heading.textContent = String(detail["title"] ?? detail["name"] ?? detail.key);
  add(heading);

  const kindTag = doc.createElement("div");
  kindTag.className = "kind-tag";
  kindTag.textContent = detail.kind;
  add(kindTag);

  const meta = doc.createElement("dl");
  meta.className = "detail-meta";
  const metaRow = (term: string, value: unknown) => {
    if (value === null || value === undefined || value === "") return;
    const dt = doc.createElement("dt");
    dt.textContent = term;
    const dd = doc.createElement("dd");
    dd.textContent = String(value);
    meta.appendChild(dt);
    meta.appendChild(dd);
  };

  if (detail.kind === "publication") {
    metaRow("type", detail["type"]);
    metaRow("year", detail["year"]);
    metaRow("doi", detail["doi"]);
    metaRow("isbn", detail["isbn"]);
    metaRow("volume", detail["volume"]);
    add(meta);
    const venue = detail["venue"] as (EntityItem & { kind: string }) | null;
    if (venue) {
      add(linkList(doc, "venue", [venue], (k) => cb.openEntity(venue.kind, k)));
    }
    add(refList(doc, "authors", detail["authors"] as Ref[], cb));
    add(refList(doc, "editors", detail["editors"] as Ref[], cb));
    add(plainList(doc, "keywords", detail["keywords"] as string[]));
    if (detail["abstract"]) {
      const p = doc.createElement("p");
      p.className = "abstract";
      p.textContent = String(detail["abstract"]);
      add(p);
    }
    add(cappedKeys(doc, "references", detail["references"] as Capped<string>, cb));
    add(cappedKeys(doc, "citations", detail["citations"] as Capped<string>, cb));
  } else if (detail.kind === "person") {
    metaRow("orcid", detail["orcid"]);
    add(meta);
    add(plainList(doc, "also known as", detail["aliases"] as string[]));
    add(
      linkList(
        doc,
        "affiliations",
        detail["affiliations"] as EntityItem[],
        (k) => cb.openEntity("institution", k),
      ),
    );
    add(pubTable(doc, "publications", detail["publications"] as Capped<PubRow>, cb));
    add(pubTable(doc, "edited", detail["edited"] as Capped<PubRow>, cb));
    add(
      histogram(
        doc,
        "keywords",
        detail["keywords"] as { keyword: string; count: number }[],
      ),
    );
  } else if (detail.kind === "conference" || detail.kind === "journal") {
    metaRow("acronym", detail["acronym"]);
    metaRow("CORE rank", detail["core_rank"]);
    add(meta);
    add(plainList(doc, "also known as", detail["aliases"] as string[]));
    add(pubTable(doc, "publications", detail["publications"] as Capped<PubRow>, cb));
  } else {
    metaRow("city", detail["city"]);
    metaRow("country", detail["country"]);
    add(meta);
    add(plainList(doc, "also known as", detail["aliases"] as string[]));
    add(
      linkList(
        doc,
        "members",
        (detail["members"] as Capped<EntityItem>).items,
        (k) => cb.openEntity("person", k),
      ),
    );
  }

  const slots: ChartSlots = { ego: null, bowtie: null };
  if (detail.kind === "person") {
    slots.ego = chartSlot(doc, container, "ego-slot", "Co-authors");
  }
  if (detail.kind !== "institution") {
    slots.bowtie = chartSlot(doc, container, "bowtie-slot", "Citations and references");
  }
  return slots;
}

function chartSlot(
  doc: Document,
  container: HTMLElement,
  cls: string,
  title: string,
): HTMLElement {
  const section = doc.createElement("section");
  section.className = cls;
  const h = doc.createElement("h3");
  h.textContent = title;
  section.appendChild(h);
  container.appendChild(section);
  return section;
}

function section(doc: Document, title: string): HTMLElement {
  const s = doc.createElement("section");
  const h = doc.createElement("h3");
  h.textContent = title;
  s.appendChild(h);
  return s;
}

function plainList(doc: Document, title: string, values: string[]): HTMLElement {
  const s = section(doc, title);
  if (!values || values.length === 0) {
    s.hidden = true;
    return s;
  }
  const ul = doc.createElement("ul");
  for (const v of values) {
    const li = doc.createElement("li");
    li.textContent = v;
    ul.appendChild(li);
  }
  s.appendChild(ul);
  return s;
}

function linkList(
  doc: Document,
  title: string,
  items: EntityItem[],
  open: (key: string) => void,
): HTMLElement {
  const s = section(doc, title);
  if (!items || items.length === 0) {
    s.hidden = true;
    return s;
  }
  const ul = doc.createElement("ul");
  for (const item of items) {
    const li = doc.createElement("li");
    const a = doc.createElement("a");
    a.href = "#";
    a.textContent = item.label;
    a.addEventListener("click", (ev) => {
      ev.preventDefault();
      open(item.key);
    });
    li.appendChild(a);
    ul.appendChild(li);
  }
  s.appendChild(ul);
  return s;
}

/** Authors/editors: entries without a key render as plain names. */
function refList(doc: Document, title: string, refs: Ref[], cb: DetailCallbacks): HTMLElement {
  const s = section(doc, title);
  if (!refs || refs.length === 0) {
    s.hidden = true;
    return s;
  }
  const ul = doc.createElement("ul");
  for (const ref of refs) {
    const li = doc.createElement("li");
    if (ref.key === null) {
      li.textContent = ref.label;
      li.className = "unlinked-name";
    } else {
      const a = doc.createElement("a");
      a.href = "#";
      a.textContent = ref.label;
      const key = ref.key;
      a.addEventListener("click", (ev) => {
        ev.preventDefault();
        cb.openEntity("person", key);
      });
      li.appendChild(a);
    }
    ul.appendChild(li);
  }
  s.appendChild(ul);
  return s;
}

function cappedKeys(
  doc: Document,
  title: string,
  capped: Capped<string>,
  cb: DetailCallbacks,
): HTMLElement {
  const s = section(doc, `${title} (${capped.total})`);
  s.dataset.total = String(capped.total);
  const ul = doc.createElement("ul");
  for (const key of capped.items) {
    const li = doc.createElement("li");
    const a = doc.createElement("a");
    a.href = "#";
    a.textContent = key;
    a.addEventListener("click", (ev) => {
      ev.preventDefault();
      cb.openPublication(key);
    });
    li.appendChild(a);
    ul.appendChild(li);
  }
  s.appendChild(ul);
  if (capped.items.length < capped.total) {
    const note = doc.createElement("p");
    note.className = "capped-note";
    note.textContent = `showing ${capped.items.length} of ${capped.total}`;
    s.appendChild(note);
  }
  return s;
}

function pubTable(
  doc: Document,
  title: string,
  capped: Capped<PubRow>,
  cb: DetailCallbacks,
): HTMLElement {
  const s = section(doc, `${title} (${capped.total})`);
  s.dataset.total = String(capped.total);
  if (capped.items.length === 0) {
    s.hidden = true;
    return s;
  }
  const table = doc.createElement("table");
  for (const row of capped.items) {
    const tr = doc.createElement("tr");
    const year = doc.createElement("td");
    year.textContent = row.year === null ? "" : String(row.year);
    tr.appendChild(year);
    const title_ = doc.createElement("td");
    const a = doc.createElement("a");
    a.href = "#";
    a.textContent = row.title;
    a.addEventListener("click", (ev) => {
      ev.preventDefault();
      cb.openPublication(row.key);
    });
    title_.appendChild(a);
    tr.appendChild(title_);
    const type = doc.createElement("td");
    type.textContent = row.type;
    tr.appendChild(type);
    table.appendChild(tr);
  }
  s.appendChild(table);
  return s;
}

function histogram(
  doc: Document,
  title: string,
  rows: { keyword: string; count: number }[],
): HTMLElement {
  const s = section(doc, title);
  if (!rows || rows.length === 0) {
    s.hidden = true;
    return s;
  }
  const max = Math.max(...rows.map((r) => r.count));
  const ul = doc.createElement("ul");
  ul.className = "histogram";
  for (const row of rows) {
    const li = doc.createElement("li");
    const bar = doc.createElement("span");
    bar.className = "bar";
    bar.style.width = `${Math.round((100 * row.count) / max)}px`;
    li.appendChild(bar);
    const label = doc.createElement("span");
    label.textContent = ` ${row.keyword} (${row.count})`;
    li.appendChild(label);
    ul.appendChild(li);
  }
  s.appendChild(ul);
  return s;
}
