/**
 * WebSocket client. Incoming messages are parsed and queued; the render
 * loop drains the queue once per frame so state changes land at frame
 * boundaries.
 */

import type { ClientMsg, InputFrameMsg, ServerMsg } from "./protocol.js";
import { inputMessage, parseServerMsg, resetMessage } from "./protocol.js";

export class SessionSocket {
  private ws: WebSocket | null = null;
  private queue: ServerMsg[] = [];
  onclose: ((reason: string) => void) | null = null;

  connect(url: string): Promise<void> {
    return new Promise((resolve, reject) => {
      const ws = new WebSocket(url);
      ws.onopen = () => {
        this.ws = ws;
        resolve();
      };
      ws.onerror = () => reject(new Error(`cannot reach ${url}`));
      ws.onclose = (ev) => {
        this.ws = null;
        this.onclose?.(ev.reason || "connection closed");
      };
      ws.onmessage = (ev) => {
        try {
          this.queue.push(parseServerMsg(String(ev.data)));
        } catch (err) {
          console.warn("schema mismatch, dropping frame:", err);
        }
      };
    });
  }

  get connected(): boolean {
    return this.ws !== null;
  }

  /** All messages received since the previous drain, in arrival order. */
  drain(): ServerMsg[] {
    const out = this.queue;
    this.queue = [];
    return out;
  }

  sendInput(frame: InputFrameMsg): void {
    this.send({ type: "input", frame });
  }

  sendReset(): void {
    this.ws?.send(resetMessage());
  }

  private send(msg: ClientMsg): void {
    if (msg.type === "input") {
      this.ws?.send(inputMessage(msg.frame));
    }
  }

  close(): void {
    this.ws?.close();
  }
}
