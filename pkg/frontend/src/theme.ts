/**
 * The one place colours live. Six suggestion categories, six fixed
 * colours, drawn from the Okabe-Ito colour-blind-safe palette.
 */

export type Category =
  | "base_concept"
  | "filter"
  | "literal_placeholder"
  | "restriction"
  | "operator"
  | "function";

export const CATEGORY_COLORS: Record<Category, string> = {
  base_concept: "#0072B2", // blue
  filter: "#009E73", // bluish green
  literal_placeholder: "#E69F00", // orange
  restriction: "#CC79A7", // reddish purple
  operator: "#56B4E9", // sky blue
  function: "#D55E00", // vermillion
};

export const CATEGORIES: Category[] = [
  "base_concept",
  "filter",
  "literal_placeholder",
  "restriction",
  "operator",
  "function",
];

export function colorFor(category: string): string {
  return CATEGORY_COLORS[category as Category] ?? "#999999";
}
