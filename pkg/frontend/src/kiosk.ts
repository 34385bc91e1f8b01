import { renderChartView } from "./render/charts.js";
import { renderMapView } from "./render/map.js";
import { renderPopup } from "./render/popup.js";
import { KioskState } from "./state.js";
import type { PayloadEnvelope } from "./types.js";

export interface KioskConfig {
  refreshSeconds: number;
  basemapUrl?: string;
  viewCycleSeconds?: number;
  animationTickMs?: number;
}

const DEFAULT_VIEW_CYCLE_SECONDS = 30;
const DEFAULT_ANIMATION_TICK_MS = 100;
const STALE_POLL_MS = 1000;

type Timer = ReturnType<typeof setInterval>;

function hhmmss(ts: number): string {
  return new Date(ts * 1000).toISOString().slice(11, 19);
}

export class Kiosk {
  readonly state: KioskState;

  private view: "map" | "chart" = "map";
  private timers: Timer[] = [];
  private dwellTimer: Timer | null = null;
  private armedDwell: number | null = null;

  private badge!: HTMLElement;
  private clockEl!: HTMLElement;
  private mapStage!: HTMLElement;
  private popupEl!: HTMLElement;
  private chartEl!: HTMLElement;
  private mapView!: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly config: KioskConfig,
  ) {
    this.state = new KioskState(config.refreshSeconds);
  }

  start(): void {
    this.buildSkeleton();
    this.timers.push(
      setInterval(() => {
        this.state.checkStale(Date.now());
        this.renderBadge();
      }, STALE_POLL_MS),
    );
    const cycleS = this.config.viewCycleSeconds ?? DEFAULT_VIEW_CYCLE_SECONDS;
    this.timers.push(
      setInterval(() => {
        this.view = this.view === "map" ? "chart" : "map";
        this.renderViews();
      }, cycleS * 1000),
    );
    const tickMs = this.config.animationTickMs ?? DEFAULT_ANIMATION_TICK_MS;
    this.timers.push(
      setInterval(() => {
        this.state.tick(tickMs / 1000);
        this.renderMap();
      }, tickMs),
    );
    this.renderAll();
  }

  stop(): void {
    for (const t of this.timers) clearInterval(t);
    this.timers = [];
    if (this.dwellTimer !== null) clearInterval(this.dwellTimer);
    this.dwellTimer = null;
    this.armedDwell = null;
  }

  push(env: PayloadEnvelope): void {
    this.state.receive(env, Date.now());
    this.armDwell(env.payload.dwell_seconds);
    this.renderAll();
  }

  private armDwell(dwellSeconds: number): void {
    // keep the running schedule across pushes; re-arm only on a new dwell
    if (this.armedDwell === dwellSeconds) return;
    if (this.dwellTimer !== null) clearInterval(this.dwellTimer);
    this.armedDwell = dwellSeconds;
    this.dwellTimer = setInterval(() => {
      this.state.advancePopup();
      this.renderMap();
      this.renderPopupPanel();
    }, dwellSeconds * 1000);
  }

  private buildSkeleton(): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = "";
    this.root.classList.add("kiosk");

    const header = doc.createElement("header");
    header.className = "kiosk-header";
    this.badge = doc.createElement("span");
    this.badge.className = "connection-badge";
    this.clockEl = doc.createElement("span");
    this.clockEl.className = "kiosk-clock";
    header.append(this.badge, this.clockEl);
    this.root.appendChild(header);

    this.mapView = doc.createElement("section");
    this.mapView.className = "view map-root";
    this.mapStage = doc.createElement("div");
    this.mapStage.className = "map-stage";
    this.popupEl = doc.createElement("aside");
    this.mapView.append(this.mapStage, this.popupEl);
    this.root.appendChild(this.mapView);

    this.chartEl = doc.createElement("section");
    this.chartEl.className = "view chart-root";
    this.root.appendChild(this.chartEl);
    this.renderViews();
  }

  private activeBuildingId(): string | null {
    const rotation = this.state.latest?.payload.popup_rotation ?? [];
    if (rotation.length === 0) return null;
    return rotation[this.state.popupIndex].building_id;
  }

  private renderAll(): void {
    this.renderBadge();
    this.renderMap();
    this.renderPopupPanel();
    this.renderCharts();
  }

  private renderBadge(): void {
    this.badge.dataset.connection = this.state.connection;
    this.badge.textContent = this.state.connection;
    const env = this.state.latest;
    this.clockEl.textContent = env ? hhmmss(env.virtual_now) : "--:--:--";
  }

  private renderViews(): void {
    this.mapView.classList.toggle("active", this.view === "map");
    this.chartEl.classList.toggle("active", this.view === "chart");
  }

  private renderMap(): void {
    const env = this.state.latest;
    if (!env) return;
    renderMapView(
      this.mapStage,
      env.payload,
      this.state.clock,
      this.activeBuildingId(),
      { basemapUrl: this.config.basemapUrl },
    );
  }

  private renderPopupPanel(): void {
    const rotation = this.state.latest?.payload.popup_rotation ?? [];
    if (rotation.length === 0) {
      this.popupEl.textContent = "";
      return;
    }
    renderPopup(this.popupEl, rotation[this.state.popupIndex]);
  }

  private renderCharts(): void {
    const env = this.state.latest;
    if (!env) return;
    renderChartView(this.chartEl, env.payload);
  }
}
