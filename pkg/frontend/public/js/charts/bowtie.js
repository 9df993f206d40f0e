/**
 * BowTie chart: outgoing references fan out to the left, incoming
 * citations to the right, one wedge segment per age bucket with its
 * count labeled. Every number shown is copied from the payload; the
 * client never recomputes totals.
 */
const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 640;
const HEIGHT = 280;
const CX = WIDTH / 2;
const CY = 120;
const SEGMENT_W = 64;
const MAX_H = 150;
const MIN_H = 18;
function segments(doc, buckets, side) {
    const g = doc.createElementNS(SVG_NS, "g");
    g.setAttribute("class", `bowtie-${side}`);
    const max = Math.max(1, ...buckets.map((b) => b.count));
    const dir = side === "references" ? -1 : 1;
    buckets.forEach((b, i) => {
        const h = MIN_H + (MAX_H - MIN_H) * (b.count / max);
        const near = CX + dir * (18 + i * SEGMENT_W);
        const far = near + dir * (SEGMENT_W - 8);
        const seg = doc.createElementNS(SVG_NS, "g");
        seg.setAttribute("class", "bowtie-segment");
        seg.setAttribute("data-side", side);
        seg.setAttribute("data-offset", String(b.offset));
        seg.setAttribute("data-count", String(b.count));
        const shape = doc.createElementNS(SVG_NS, "polygon");
        const innerH = Math.max(MIN_H, h * 0.55);
        shape.setAttribute("points", [
            `${near},${CY - innerH / 2}`,
            `${far},${CY - h / 2}`,
            `${far},${CY + h / 2}`,
            `${near},${CY + innerH / 2}`,
        ].join(" "));
        seg.appendChild(shape);
        const count = doc.createElementNS(SVG_NS, "text");
        count.setAttribute("x", String((near + far) / 2));
        count.setAttribute("y", String(CY + 4));
        count.setAttribute("text-anchor", "middle");
        count.setAttribute("class", "bowtie-count");
        count.textContent = String(b.count);
        seg.appendChild(count);
        const age = doc.createElementNS(SVG_NS, "text");
        age.setAttribute("x", String((near + far) / 2));
        age.setAttribute("y", String(CY + MAX_H / 2 + 24));
        age.setAttribute("text-anchor", "middle");
        age.setAttribute("class", "bowtie-age");
        age.textContent = `${b.offset}y`;
        seg.appendChild(age);
        g.appendChild(seg);
    });
    return g;
}
export function renderBowtie(doc, payload) {
    const svg = doc.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
    svg.setAttribute("class", "bowtie-chart");
    svg.setAttribute("role", "img");
    svg.appendChild(segments(doc, payload.reference_buckets, "references"));
    svg.appendChild(segments(doc, payload.citation_buckets, "citations"));
    const knot = doc.createElementNS(SVG_NS, "circle");
    knot.setAttribute("cx", String(CX));
    knot.setAttribute("cy", String(CY));
    knot.setAttribute("r", "9");
    knot.setAttribute("class", "bowtie-knot");
    svg.appendChild(knot);
    const refTotal = doc.createElementNS(SVG_NS, "text");
    refTotal.setAttribute("x", String(CX - 110));
    refTotal.setAttribute("y", String(HEIGHT - 12));
    refTotal.setAttribute("text-anchor", "middle");
    refTotal.setAttribute("class", "bowtie-total");
    refTotal.setAttribute("data-role", "references-total");
    refTotal.textContent = `${payload.totals.references} references`;
    svg.appendChild(refTotal);
    const citeTotal = doc.createElementNS(SVG_NS, "text");
    citeTotal.setAttribute("x", String(CX + 110));
    citeTotal.setAttribute("y", String(HEIGHT - 12));
    citeTotal.setAttribute("text-anchor", "middle");
    citeTotal.setAttribute("class", "bowtie-total");
    citeTotal.setAttribute("data-role", "citations-total");
    citeTotal.textContent = `${payload.totals.citations} citations`;
    svg.appendChild(citeTotal);
    return svg;
}
