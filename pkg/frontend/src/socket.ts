// Thin WebSocket client with auto-reconnect; the scene freezes and a
// banner shows while disconnected.

import { parseState, type StateMessage } from "./protocol.js";

export interface SocketEvents {
  onState: (state: StateMessage) => void;
  onOpen?: () => void;
  onClose?: () => void;
}

export class ConsoleSocket {
  private ws: WebSocket | null = null;
  private closed = false;

  constructor(readonly url: string, readonly events: SocketEvents,
              readonly retryMs = 2000) {}

  connect(): void {
    if (this.closed) return;
    this.ws = new WebSocket(this.url);
    this.ws.onopen = () => this.events.onOpen?.();
    this.ws.onmessage = (ev: MessageEvent) => {
      const state = parseState(String(ev.data));
      if (state) this.events.onState(state);
    };
    this.ws.onclose = () => {
      this.events.onClose?.();
      this.ws = null;
      if (!this.closed) setTimeout(() => this.connect(), this.retryMs);
    };
    this.ws.onerror = () => this.ws?.close();
  }

  get isOpen(): boolean {
    return this.ws !== null && this.ws.readyState === WebSocket.OPEN;
  }

  send(text: string): boolean {
    if (!this.isOpen) return false;
    this.ws!.send(text);
    return true;
  }

  close(): void {
    this.closed = true;
    this.ws?.close();
  }
}
