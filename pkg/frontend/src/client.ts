// Engine client: REST session lifecycle plus the per-session socket.
// One turn in flight at a time, matching the engine's serialization
// contract; the socket reconnects with the stored session id, so a
// dropped connection resumes the same dialogue.

import {
  StateSnapshot,
  TurnRecordPayload,
  WsFrame,
  isTurnRecord,
  parseFrame,
} from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((event: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
  onerror: ((event: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;
export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface EngineClientOptions {
  baseUrl: string;
  fetchImpl?: FetchLike;
  socketFactory?: SocketFactory;
  reconnectDelayMs?: number;
  maxReconnectAttempts?: number;
}

export interface SessionHandlers {
  onReply?: (record: TurnRecordPayload) => void;
  onState?: (snapshot: StateSnapshot) => void;
  onError?: (code: string) => void;
  onOpen?: () => void;
  onGone?: () => void;
}

export class EngineClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;
  private readonly socketFactory: SocketFactory;
  private readonly reconnectDelayMs: number;
  private readonly maxReconnectAttempts: number;

  constructor(options: EngineClientOptions) {
    this.baseUrl = options.baseUrl.replace(/\/$/, "");
    this.fetchImpl =
      options.fetchImpl ?? ((url, init) => fetch(url, init));
    this.socketFactory =
      options.socketFactory ??
      ((url) => new WebSocket(url) as unknown as SocketLike);
    this.reconnectDelayMs = options.reconnectDelayMs ?? 1000;
    this.maxReconnectAttempts = options.maxReconnectAttempts ?? 5;
  }

  async openSession(): Promise<string> {
    const response = await this.fetchImpl(`${this.baseUrl}/sessions`, { method: "POST" });
    if (!response.ok) {
      throw new Error(`openSession failed: ${response.status}`);
    }
    const body = (await response.json()) as { id: string };
    return body.id;
  }

  async getState(sessionId: string): Promise<StateSnapshot> {
    const response = await this.fetchImpl(`${this.baseUrl}/sessions/${sessionId}/state`);
    if (!response.ok) {
      throw new Error(`getState failed: ${response.status}`);
    }
    return (await response.json()) as StateSnapshot;
  }

  async closeSession(sessionId: string): Promise<void> {
    await this.fetchImpl(`${this.baseUrl}/sessions/${sessionId}`, { method: "DELETE" });
  }

  connect(sessionId: string, handlers: SessionHandlers): SessionSocket {
    const wsBase = this.baseUrl.replace(/^http/, "ws");
    return new SessionSocket(
      `${wsBase}/sessions/${sessionId}/ws`,
      this.socketFactory,
      handlers,
      this.reconnectDelayMs,
      this.maxReconnectAttempts,
    );
  }
}

export class SessionSocket {
  busy = false;
  closedByUser = false;
  reconnectAttempts = 0;

  private socket: SocketLike | null = null;

  constructor(
    private readonly url: string,
    private readonly factory: SocketFactory,
    private readonly handlers: SessionHandlers,
    private readonly reconnectDelayMs: number,
    private readonly maxReconnectAttempts: number,
  ) {
    this.open();
  }

  private open(): void {
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.reconnectAttempts = 0;
      this.handlers.onOpen?.();
    };
    socket.onmessage = (event) => this.handleFrame(parseFrame(String(event.data)));
    socket.onerror = () => {
      // the close handler decides about reconnecting
    };
    socket.onclose = () => {
      this.busy = false;
      if (this.closedByUser) {
        return;
      }
      if (this.reconnectAttempts >= this.maxReconnectAttempts) {
        this.handlers.onGone?.();
        return;
      }
      this.reconnectAttempts += 1;
      setTimeout(() => this.open(), this.reconnectDelayMs);
    };
  }

  private handleFrame(frame: WsFrame | null): void {
    if (!frame) {
      return;
    }
    if (frame.type === "reply" && isTurnRecord(frame.payload)) {
      this.busy = false;
      this.handlers.onReply?.(frame.payload);
    } else if (frame.type === "state") {
      this.handlers.onState?.(frame.payload as StateSnapshot);
    } else if (frame.type === "error") {
      this.busy = false;
      const code = String((frame.payload as { code?: string })?.code ?? "unknown");
      this.handlers.onError?.(code);
    }
  }

  sendUtterance(text: string): boolean {
    if (this.busy || !this.socket) {
      return false;
    }
    this.busy = true;
    this.socket.send(JSON.stringify({ type: "utterance", payload: { text } }));
    return true;
  }

  close(): void {
    this.closedByUser = true;
    this.socket?.close();
  }
}
