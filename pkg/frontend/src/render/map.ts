import { bounceHeight } from "../bounce.js";
import type { MapPoint, PayloadDoc } from "../types.js";

// Pixel height of a column whose encoded height is 1.0; purely a screen
// scale, the encoded value is what the test asserts against.
const PX_PER_UNIT = 2;
const MIN_COLUMN_PX = 4;

export interface MapViewOptions {
  basemapUrl?: string;
}

function extent(values: number[]): [number, number] {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  return hi > lo ? [lo, hi] : [lo - 0.0005, hi + 0.0005];
}

function percent(v: number, lo: number, hi: number): number {
  return ((v - lo) / (hi - lo)) * 90 + 5; // 5% margin each side
}

export function renderMapView(
  root: HTMLElement,
  payload: PayloadDoc,
  clock: number,
  activeBuildingId: string | null,
  options: MapViewOptions = {},
): void {
  root.textContent = "";
  root.classList.add("map-view");

  if (options.basemapUrl) {
    const img = root.ownerDocument.createElement("img");
    img.className = "basemap";
    img.src = options.basemapUrl;
    root.appendChild(img);
  } else {
    // no tile source configured: plain-coordinate fallback grid with a
    // visible banner so operators know the imagery is missing
    const grid = root.ownerDocument.createElement("div");
    grid.className = "fallback-grid";
    root.appendChild(grid);
    const banner = root.ownerDocument.createElement("div");
    banner.className = "basemap-banner";
    banner.textContent = "Basemap unavailable, showing coordinate grid";
    root.appendChild(banner);
  }

  const pts = payload.map_points;
  if (pts.length === 0) return;
  const [latLo, latHi] = extent(pts.map((p) => p.latitude));
  const [lonLo, lonHi] = extent(pts.map((p) => p.longitude));

  for (const p of pts) {
    root.appendChild(
      renderColumn(root.ownerDocument, p, clock, latLo, latHi, lonLo, lonHi),
    );
  }

  if (activeBuildingId !== null) {
    const active = pts.find((p) => p.building_id === activeBuildingId);
    if (active) {
      const pin = root.ownerDocument.createElement("div");
      pin.className = "map-pin";
      pin.textContent = "\u{1F4CD}";
      pin.dataset.buildingId = active.building_id;
      pin.style.left = `${percent(active.longitude, lonLo, lonHi)}%`;
      pin.style.bottom = `${percent(active.latitude, latLo, latHi)}%`;
      root.appendChild(pin);
    }
  }
}

function renderColumn(
  doc: Document,
  p: MapPoint,
  clock: number,
  latLo: number,
  latHi: number,
  lonLo: number,
  lonHi: number,
): HTMLElement {
  const col = doc.createElement("div");
  col.className = "map-column";
  const rendered = bounceHeight(
    p.base_height,
    clock,
    p.bounce_period,
    p.bounce_phase,
    p.bounce_amplitude_ratio,
  );
  col.dataset.buildingId = p.building_id;
  col.dataset.count = String(p.count);
  col.dataset.level = p.level;
  col.dataset.renderedHeight = String(rendered);
  col.style.left = `${percent(p.longitude, lonLo, lonHi)}%`;
  col.style.bottom = `${percent(p.latitude, latLo, latHi)}%`;
  col.style.height = `${Math.max(rendered * PX_PER_UNIT, MIN_COLUMN_PX)}px`;
  col.style.background = `rgb(${p.color[0]},${p.color[1]},${p.color[2]})`;

  const label = doc.createElement("span");
  label.className = "map-count";
  label.textContent = String(p.count);
  col.appendChild(label);
  return col;
}
