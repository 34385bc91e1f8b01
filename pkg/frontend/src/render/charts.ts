import type { ChordDiagram, PayloadDoc, TotalsChart } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const LINE_W = 576;
const LINE_H = 80;
const CHORD_R = 90;
const CHORD_SIZE = 220;

function rankingBars(doc: Document, payload: PayloadDoc): HTMLElement {
  const panel = doc.createElement("div");
  panel.className = "panel ranking";
  const maxTotal = Math.max(...payload.zone_ranking.map((z) => z.total), 1);
  for (const bar of payload.zone_ranking) {
    const row = doc.createElement("div");
    row.className = "ranking-row";
    row.dataset.zoneId = bar.zone_id;
    const name = doc.createElement("span");
    name.className = "zone-name";
    name.textContent = bar.name;
    const track = doc.createElement("div");
    track.className = "bar-track";
    const fill = doc.createElement("div");
    fill.className = "bar-fill";
    fill.style.width = `${(bar.total / maxTotal) * 100}%`;
    fill.style.background = `rgb(${bar.bar_color[0]},${bar.bar_color[1]},${bar.bar_color[2]})`;
    track.appendChild(fill);
    const total = doc.createElement("span");
    total.className = "zone-total";
    total.textContent = String(bar.total);
    row.append(name, track, total);
    panel.appendChild(row);
  }
  return panel;
}

function totalsLine(doc: Document, totals: TotalsChart): HTMLElement {
  const panel = doc.createElement("div");
  panel.className = "panel totals";
  const counts = totals.history.counts.concat(totals.forecast.counts);
  const top = Math.max(...counts, 1);
  const step = counts.length > 1 ? LINE_W / (counts.length - 1) : 0;
  const y = (v: number) => LINE_H - (v / top) * LINE_H;

  const svg = doc.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "totals-chart");
  svg.setAttribute("viewBox", `0 0 ${LINE_W} ${LINE_H}`);

  const history = doc.createElementNS(SVG_NS, "polyline");
  history.setAttribute("class", "history-line");
  history.setAttribute(
    "points",
    counts
      .slice(0, totals.boundary_index)
      .map((c, i) => `${i * step},${y(c)}`)
      .join(" "),
  );
  svg.appendChild(history);

  const forecast = doc.createElementNS(SVG_NS, "polyline");
  forecast.setAttribute("class", "forecast-line");
  forecast.setAttribute(
    "points",
    counts
      .slice(totals.boundary_index)
      .map((c, i) => `${(totals.boundary_index + i) * step},${y(c)}`)
      .join(" "),
  );
  svg.appendChild(forecast);

  // observed data ends here; everything right of the divider is predicted
  const divider = doc.createElementNS(SVG_NS, "line");
  divider.setAttribute("class", "forecast-divider");
  const x = totals.boundary_index * step;
  divider.setAttribute("x1", String(x));
  divider.setAttribute("x2", String(x));
  divider.setAttribute("y1", "0");
  divider.setAttribute("y2", String(LINE_H));
  divider.dataset.boundaryIndex = String(totals.boundary_index);
  svg.appendChild(divider);

  panel.appendChild(svg);
  return panel;
}

function chordDiagram(doc: Document, chord: ChordDiagram): HTMLElement {
  const panel = doc.createElement("div");
  panel.className = "panel chord";

  if (chord.anchors.length === 0) {
    const empty = doc.createElement("div");
    empty.className = "chord-empty";
    empty.textContent = "no recent movement";
    panel.appendChild(empty);
    return panel;
  }

  const svg = doc.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "chord-svg");
  svg.setAttribute("viewBox", `0 0 ${CHORD_SIZE} ${CHORD_SIZE}`);
  const c = CHORD_SIZE / 2;
  const angle = new Map<string, number>();
  chord.zones.forEach((z, i) => {
    angle.set(z.id, (2 * Math.PI * i) / chord.zones.length - Math.PI / 2);
  });
  const px = (a: number) => c + CHORD_R * Math.cos(a);
  const py = (a: number) => c + CHORD_R * Math.sin(a);

  for (const z of chord.zones) {
    const a = angle.get(z.id)!;
    const dot = doc.createElementNS(SVG_NS, "circle");
    dot.setAttribute("class", "chord-zone");
    dot.setAttribute("cx", String(px(a)));
    dot.setAttribute("cy", String(py(a)));
    dot.setAttribute("r", "4");
    dot.dataset.zoneId = z.id;
    svg.appendChild(dot);
    const label = doc.createElementNS(SVG_NS, "text");
    label.setAttribute("class", "chord-label");
    label.setAttribute("x", String(c + (CHORD_R + 12) * Math.cos(a)));
    label.setAttribute("y", String(c + (CHORD_R + 12) * Math.sin(a)));
    label.textContent = z.name;
    svg.appendChild(label);
  }

  for (const anchor of chord.anchors) {
    const a1 = angle.get(anchor.from_zone)!;
    const a2 = angle.get(anchor.to_zone)!;
    const path = doc.createElementNS(SVG_NS, "path");
    path.setAttribute(
      "d",
      `M ${px(a1)} ${py(a1)} Q ${c} ${c} ${px(a2)} ${py(a2)}`,
    );
    path.setAttribute(
      "class",
      anchor.highlighted ? "chord-path highlighted" : "chord-path",
    );
    path.dataset.fromZone = anchor.from_zone;
    path.dataset.toZone = anchor.to_zone;
    path.dataset.count = String(anchor.count);
    svg.appendChild(path);
  }
  panel.appendChild(svg);

  const texts = doc.createElement("ul");
  texts.className = "anchor-texts";
  for (const anchor of chord.anchors) {
    if (!anchor.highlighted) continue;
    const li = doc.createElement("li");
    li.className = "anchor-text";
    li.textContent = anchor.redundancy_text;
    texts.appendChild(li);
  }
  panel.appendChild(texts);
  return panel;
}

function ladder(
  doc: Document,
  title: string,
  cls: string,
  rungs: PayloadDoc["ladder_in"],
): HTMLElement {
  const panel = doc.createElement("div");
  panel.className = `panel ladder ${cls}`;
  const head = doc.createElement("h3");
  head.textContent = title;
  panel.appendChild(head);
  const list = doc.createElement("ol");
  for (const rung of rungs) {
    const li = doc.createElement("li");
    li.className = "ladder-rung";
    li.dataset.buildingId = rung.building_id;
    const name = doc.createElement("span");
    name.className = "rung-name";
    name.textContent = rung.name;
    const count = doc.createElement("span");
    count.className = "rung-count";
    count.textContent = String(rung.count);
    li.append(name, count);
    list.appendChild(li);
  }
  panel.appendChild(list);
  return panel;
}

export function renderChartView(root: HTMLElement, payload: PayloadDoc): void {
  const doc = root.ownerDocument;
  root.textContent = "";
  root.classList.add("chart-view");
  root.appendChild(rankingBars(doc, payload));
  root.appendChild(totalsLine(doc, payload.totals));
  root.appendChild(chordDiagram(doc, payload.chord));
  root.appendChild(ladder(doc, "Top incoming", "ladder-in", payload.ladder_in));
  root.appendChild(ladder(doc, "Top outgoing", "ladder-out", payload.ladder_out));
}
