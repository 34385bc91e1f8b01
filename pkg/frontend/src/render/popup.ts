import type { PopupPanel, SeriesDoc } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const CHART_W = 288;
const CHART_H = 60;

// Category key -> glyph; the raw key stays on the element for traceability.
const CATEGORY_ICONS: Record<string, string> = {
  library: "\u{1F4DA}",
  canteen: "\u{1F37D}\u{FE0F}",
  dormitory: "\u{1F6CF}\u{FE0F}",
  academic: "\u{1F393}",
  sports: "\u{1F3DF}\u{FE0F}",
  administration: "\u{1F3DB}\u{FE0F}",
  other: "\u{1F4CC}",
};

function chartX(series: SeriesDoc, ts: number): number {
  const bins = series.counts.length;
  const i = (ts - series.bin_start) / series.bin_width;
  return bins > 1 ? (i / (bins - 1)) * CHART_W : 0;
}

function chartY(counts: number[], v: number): number {
  const top = Math.max(...counts, 1);
  return CHART_H - (v / top) * CHART_H;
}

function lineChart(doc: Document, panel: PopupPanel): SVGSVGElement {
  const svg = doc.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "popup-chart");
  svg.setAttribute("viewBox", `0 0 ${CHART_W} ${CHART_H}`);

  const counts = panel.series_24h.counts;
  const line = doc.createElementNS(SVG_NS, "polyline");
  const step = counts.length > 1 ? CHART_W / (counts.length - 1) : 0;
  line.setAttribute(
    "points",
    counts.map((c, i) => `${i * step},${chartY(counts, c)}`).join(" "),
  );
  line.setAttribute("class", "history-line");
  svg.appendChild(line);

  for (const [ts, count] of panel.peak_marks) {
    const dot = doc.createElementNS(SVG_NS, "circle");
    dot.setAttribute("class", "peak-mark");
    dot.setAttribute("cx", String(chartX(panel.series_24h, ts)));
    dot.setAttribute("cy", String(chartY(counts, count)));
    dot.setAttribute("r", "3");
    dot.dataset.ts = String(ts);
    dot.dataset.count = String(count);
    svg.appendChild(dot);
  }
  return svg;
}

export function renderPopup(root: HTMLElement, panel: PopupPanel): void {
  const doc = root.ownerDocument;
  root.textContent = "";
  root.classList.add("popup");
  root.dataset.buildingId = panel.building_id;

  const header = doc.createElement("div");
  header.className = "popup-header";
  const icon = doc.createElement("span");
  icon.className = "popup-icon";
  icon.dataset.icon = panel.icon;
  icon.textContent = CATEGORY_ICONS[panel.icon] ?? CATEGORY_ICONS.other;
  const name = doc.createElement("span");
  name.className = "popup-name";
  name.textContent = panel.name;
  header.append(icon, name);
  root.appendChild(header);

  const stats = doc.createElement("div");
  stats.className = "popup-stats";
  const count = doc.createElement("span");
  count.className = "popup-count";
  count.textContent = String(panel.count);
  const level = doc.createElement("span");
  level.className = "popup-level";
  level.textContent = panel.level;
  stats.append(count, level);
  root.appendChild(stats);

  root.appendChild(lineChart(doc, panel));

  // textual twin of the chart marks: same peaks, same order
  const table = doc.createElement("table");
  table.className = "peak-table";
  for (const row of panel.peak_table) {
    const tr = doc.createElement("tr");
    const time = doc.createElement("td");
    time.className = "peak-time";
    time.textContent = row.time;
    const n = doc.createElement("td");
    n.className = "peak-count";
    n.textContent = String(row.count);
    tr.append(time, n);
    table.appendChild(tr);
  }
  root.appendChild(table);
}
