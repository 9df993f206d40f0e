/**
 * The one place colours live. Six suggestion categories, six fixed
 * colours, drawn from the Okabe-Ito colour-blind-safe palette.
 */
export const CATEGORY_COLORS = {
    base_concept: "#0072B2", // blue
    filter: "#009E73", // bluish green
    literal_placeholder: "#E69F00", // orange
    restriction: "#CC79A7", // reddish purple
    operator: "#56B4E9", // sky blue
    function: "#D55E00", // vermillion
};
export const CATEGORIES = [
    "base_concept",
    "filter",
    "literal_placeholder",
    "restriction",
    "operator",
    "function",
];
export function colorFor(category) {
    return CATEGORY_COLORS[category] ?? "#999999";
}
