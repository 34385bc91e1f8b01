import type { PayloadEnvelope } from "./types.js";

// Minimal WebSocket surface so tests can inject a fake.
export interface SocketLike {
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;
export type FetchFn = (url: string) => Promise<{ ok: boolean; json(): Promise<unknown> }>;

export interface StreamOptions {
  refreshSeconds: number;
  socketFactory?: SocketFactory;
  fetchFn?: FetchFn;
  initialBackoffMs?: number;
  maxBackoffMs?: number;
}

const DEFAULT_INITIAL_BACKOFF_MS = 1000;
const DEFAULT_MAX_BACKOFF_MS = 30000;

export class StreamClient {
  private socket: SocketLike | null = null;
  private backoffMs: number;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;
  private pollTimer: ReturnType<typeof setInterval> | null = null;
  private stopped = false;

  constructor(
    private readonly baseUrl: string,
    private readonly onEnvelope: (env: PayloadEnvelope) => void,
    private readonly options: StreamOptions,
  ) {
    this.backoffMs = options.initialBackoffMs ?? DEFAULT_INITIAL_BACKOFF_MS;
  }

  start(): void {
    this.stopped = false;
    this.connect();
  }

  stop(): void {
    this.stopped = true;
    if (this.reconnectTimer !== null) clearTimeout(this.reconnectTimer);
    this.reconnectTimer = null;
    this.stopPolling();
    this.socket?.close();
    this.socket = null;
  }

  private wsUrl(): string {
    return `${this.baseUrl.replace(/^http/, "ws")}/api/v1/stream`;
  }

  private connect(): void {
    const factory =
      this.options.socketFactory ??
      ((url: string) => new WebSocket(url) as unknown as SocketLike);
    let sock: SocketLike;
    try {
      sock = factory(this.wsUrl());
    } catch {
      this.scheduleReconnect();
      return;
    }
    this.socket = sock;
    sock.onmessage = (ev) => {
      this.backoffMs = this.options.initialBackoffMs ?? DEFAULT_INITIAL_BACKOFF_MS;
      this.stopPolling();
      this.onEnvelope(JSON.parse(ev.data) as PayloadEnvelope);
    };
    const onDown = () => {
      if (this.socket === sock) this.socket = null;
      this.scheduleReconnect();
    };
    sock.onclose = onDown;
    sock.onerror = onDown;
  }

  private scheduleReconnect(): void {
    if (this.stopped || this.reconnectTimer !== null) return;
    this.startPolling();
    this.reconnectTimer = setTimeout(() => {
      this.reconnectTimer = null;
      this.connect();
    }, this.backoffMs);
    this.backoffMs = Math.min(
      this.backoffMs * 2,
      this.options.maxBackoffMs ?? DEFAULT_MAX_BACKOFF_MS,
    );
  }

  // while the stream is down the kiosk falls back to plain GET polling so
  // the screen keeps moving even if the socket path is blocked
  private startPolling(): void {
    if (this.pollTimer !== null) return;
    const fetchFn = this.options.fetchFn ?? ((url: string) => fetch(url));
    this.pollTimer = setInterval(() => {
      fetchFn(`${this.baseUrl}/api/v1/payload`)
        .then((res) => (res.ok ? res.json() : null))
        .then((doc) => {
          if (doc) this.onEnvelope(doc as PayloadEnvelope);
        })
        .catch(() => undefined);
    }, this.options.refreshSeconds * 1000);
  }

  private stopPolling(): void {
    if (this.pollTimer !== null) clearInterval(this.pollTimer);
    this.pollTimer = null;
  }
}
