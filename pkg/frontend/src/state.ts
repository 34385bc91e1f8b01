import type { Connection, PayloadEnvelope } from "./types.js";

// Staleness threshold: no push for strictly more than three refresh
// intervals means the screen is showing old numbers and must say so.
const STALE_FACTOR = 3;

export class KioskState {
  latest: PayloadEnvelope | null = null;
  connection: Connection = "connecting";
  popupIndex = 0;
  clock = 0; // animation seconds since mount

  private lastPushMs: number | null = null;

  constructor(readonly refreshSeconds: number) {
    if (refreshSeconds <= 0) {
      throw new Error(`refreshSeconds must be positive, got ${refreshSeconds}`);
    }
  }

  receive(env: PayloadEnvelope, nowMs: number): void {
    this.latest = env;
    this.lastPushMs = nowMs;
    this.connection = "live";
    // a shorter rotation in the new payload must not strand the index
    const n = env.payload.popup_rotation.length;
    this.popupIndex = n > 0 ? this.popupIndex % n : 0;
  }

  advancePopup(): void {
    const n = this.latest?.payload.popup_rotation.length ?? 0;
    if (n > 0) this.popupIndex = (this.popupIndex + 1) % n;
  }

  checkStale(nowMs: number): void {
    if (this.lastPushMs === null) return; // still connecting, not stale
    if (nowMs - this.lastPushMs > STALE_FACTOR * this.refreshSeconds * 1000) {
      this.connection = "stale";
    }
  }

  tick(dtSeconds: number): void {
    this.clock += dtSeconds;
  }
}
