/**
 * Radial co-author chart. Neighbors keep the payload order around the
 * circle, and radial distance is rank-based: every distinct co-publication
 * count is one ring, higher counts on inner rings. Distance is therefore
 * inversely monotone in the count without being proportional to it.
 */
const SVG_NS = "http://www.w3.org/2000/svg";
const SIZE = 420;
const CENTER = SIZE / 2;
const R_MIN = 70;
const R_MAX = 185;
export function ringRadii(counts) {
    const distinct = [...new Set(counts)].sort((a, b) => b - a);
    const step = distinct.length > 1 ? (R_MAX - R_MIN) / (distinct.length - 1) : 0;
    return new Map(distinct.map((c, i) => [c, R_MIN + i * step]));
}
export function renderEgo(doc, payload) {
    const svg = doc.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${SIZE} ${SIZE}`);
    svg.setAttribute("class", "ego-chart");
    svg.setAttribute("role", "img");
    const radii = ringRadii(payload.neighbors.map((n) => n.count));
    const n = payload.neighbors.length;
    payload.neighbors.forEach((nb, i) => {
        const angle = -Math.PI / 2 + (2 * Math.PI * i) / Math.max(n, 1);
        const r = radii.get(nb.count) ?? R_MAX;
        const x = CENTER + r * Math.cos(angle);
        const y = CENTER + r * Math.sin(angle);
        const edge = doc.createElementNS(SVG_NS, "line");
        edge.setAttribute("x1", String(CENTER));
        edge.setAttribute("y1", String(CENTER));
        edge.setAttribute("x2", String(x));
        edge.setAttribute("y2", String(y));
        edge.setAttribute("class", "ego-edge");
        svg.appendChild(edge);
        const g = doc.createElementNS(SVG_NS, "g");
        g.setAttribute("class", "ego-neighbor");
        g.setAttribute("data-key", nb.key);
        g.setAttribute("data-count", String(nb.count));
        g.setAttribute("data-distance", r.toFixed(1));
        const dot = doc.createElementNS(SVG_NS, "circle");
        dot.setAttribute("cx", String(x));
        dot.setAttribute("cy", String(y));
        dot.setAttribute("r", "7");
        g.appendChild(dot);
        const label = doc.createElementNS(SVG_NS, "text");
        label.setAttribute("x", String(x));
        label.setAttribute("y", String(y - 12));
        label.setAttribute("text-anchor", "middle");
        label.textContent = `${nb.name} (${nb.count})`;
        g.appendChild(label);
        svg.appendChild(g);
    });
    const hub = doc.createElementNS(SVG_NS, "circle");
    hub.setAttribute("cx", String(CENTER));
    hub.setAttribute("cy", String(CENTER));
    hub.setAttribute("r", "10");
    hub.setAttribute("class", "ego-center");
    svg.appendChild(hub);
    const name = doc.createElementNS(SVG_NS, "text");
    name.setAttribute("x", String(CENTER));
    name.setAttribute("y", String(CENTER + 26));
    name.setAttribute("text-anchor", "middle");
    name.setAttribute("class", "ego-center-label");
    name.textContent = payload.center.name;
    svg.appendChild(name);
    return svg;
}
