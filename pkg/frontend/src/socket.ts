// WebSocket transport: connect/reconnect lifecycle, JSON frames in and out.
// Schema-checks outbound frames so the client can never send anything the
// server would not understand.

import { ClientFrame, isClientFrame, ServerFrame } from "./protocol.js";
import { ConnectionState } from "./dashboard.js";

export interface GameSocketOptions {
  url: string;
  onFrame: (frame: ServerFrame) => void;
  onStateChange: (state: ConnectionState) => void;
}

const BACKOFF_BASE_MS = 1000;
const BACKOFF_MAX_MS = 15000;

export class GameSocket {
  private ws: WebSocket | null = null;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;
  private reconnectAttempt = 0;
  private shouldReconnect = false;
  private sessionId: string | null = null;

  constructor(private readonly options: GameSocketOptions) {}

  connect(): void {
    this.shouldReconnect = true;
    this.open();
  }

  disconnect(): void {
    this.shouldReconnect = false;
    if (this.reconnectTimer !== null) clearTimeout(this.reconnectTimer);
    this.reconnectTimer = null;
    this.ws?.close();
    this.ws = null;
    this.options.onStateChange("disconnected");
  }

  /** Remember the session so a reconnect re-hydrates instead of starting over. */
  adoptSession(sessionId: string): void {
    this.sessionId = sessionId;
  }

  send(frame: ClientFrame): void {
    if (!isClientFrame(frame)) {
      throw new Error(`not a client frame: ${JSON.stringify(frame)}`);
    }
    if (this.ws?.readyState === WebSocket.OPEN) {
      this.ws.send(JSON.stringify(frame));
    }
  }

  private open(): void {
    const url = this.sessionId
      ? `${this.options.url}?session=${encodeURIComponent(this.sessionId)}`
      : this.options.url;
    this.ws = new WebSocket(url);

    this.ws.onopen = () => {
      this.reconnectAttempt = 0;
      this.options.onStateChange("connected");
    };
    this.ws.onmessage = (event) => {
      try {
        this.options.onFrame(JSON.parse(event.data as string) as ServerFrame);
      } catch {
        // non-JSON payloads are dropped; the server never sends them
      }
    };
    this.ws.onclose = () => {
      this.ws = null;
      if (this.shouldReconnect) {
        this.options.onStateChange("reconnecting");
        const delay = Math.min(BACKOFF_BASE_MS * 2 ** this.reconnectAttempt, BACKOFF_MAX_MS);
        this.reconnectAttempt++;
        this.reconnectTimer = setTimeout(() => this.open(), delay);
      } else {
        this.options.onStateChange("disconnected");
      }
    };
  }
}
