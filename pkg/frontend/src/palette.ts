// District colors. The service assigns each district a color_index; we
// only map that index onto a fixed cycle, so two clients always agree on
// which district is which color.

export const DISTRICT_COLORS = [
  "#4e9cf5", // blue
  "#6fce6f", // green
  "#f2635f", // red
  "#d9a23f", // amber
  "#b07ae8", // violet
  "#4fc8c3", // teal
  "#ef89c4", // pink
  "#9aa75c", // olive
];

export const UI = {
  bg: "#14161c",
  grid: "#20242e",
  rowFill: "rgba(255,255,255,0.045)",
  rowFillHover: "rgba(255,255,255,0.10)",
  pointStroke: "#0c0d11",
  hoverRing: "#ffffff",
  selectRing: "#ffd54a",
  pathEdge: "rgba(255,255,255,0.75)",
  routeLine: "#ffd54a",
  routeDot: "#ffef9e",
  landmark: "#e8ecf4",
  scrubCursor: "rgba(255,255,255,0.85)",
  highlightRing: "#7ef0a8",
};

export function districtColor(index: number): string {
  const n = DISTRICT_COLORS.length;
  return DISTRICT_COLORS[((index % n) + n) % n];
}
