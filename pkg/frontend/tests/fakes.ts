// Test doubles: a scriptable socket and an in-memory engine stub that
// speaks the same wire protocol.

import { SocketLike } from "../src/client.js";
import { StateSnapshot, TurnRecordPayload } from "../src/protocol.js";

export class FakeSocket implements SocketLike {
  sent: string[] = [];
  closed = false;
  onopen: (() => void) | null = null;
  onmessage: ((event: { data: unknown }) => void) | null = null;
  onclose: (() => void) | null = null;
  onerror: ((event: unknown) => void) | null = null;

  constructor(public url: string) {}

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
    this.onclose?.();
  }

  // test helpers
  emitOpen(): void {
    this.onopen?.();
  }

  emitFrame(frame: unknown): void {
    this.onmessage?.({ data: JSON.stringify(frame) });
  }

  dropConnection(): void {
    this.onclose?.();
  }
}

export function turnRecord(overrides: Partial<TurnRecordPayload> = {}): TurnRecordPayload {
  return {
    type: "turn",
    customer_utterance: "",
    nlu: { das: "", score: 0, source: "fallback" },
    system_das: "welcome (), self_introduction ()",
    system_utterance: "Welcome! Thank you for stopping by our travel counter today.",
    cues: [
      {
        intent: "welcome",
        during: { expression: "small_smile", motion: "bow" },
        after: { expression: "small_smile", motion: "none" },
      },
    ],
    phase_before: "Greeting",
    phase_after: "ProfileGathering",
    latency_ms: 0,
    ts: 0,
    ...overrides,
  };
}

export function snapshot(overrides: Partial<StateSnapshot> = {}): StateSnapshot {
  return {
    profile: {},
    belief: {},
    focused_attraction: null,
    pending_request: [],
    pending_confirmation: null,
    confirmation_result: null,
    history: [],
    phase: "ProfileGathering",
    turn_count: 1,
    silence_streak: 1,
    farewell_requested: false,
    recommendation_rejected: false,
    introduced: false,
    requested_slots: [],
    recommended_attractions: [],
    ...overrides,
  };
}

export interface FakeEngine {
  fetchImpl: (url: string, init?: RequestInit) => Promise<Response>;
  sockets: FakeSocket[];
  socketFactory: (url: string) => FakeSocket;
  stateForGet: StateSnapshot;
}

export function fakeEngine(): FakeEngine {
  const sockets: FakeSocket[] = [];
  const engine: FakeEngine = {
    sockets,
    stateForGet: snapshot(),
    socketFactory: (url: string) => {
      const socket = new FakeSocket(url);
      sockets.push(socket);
      return socket;
    },
    fetchImpl: async (url: string, init?: RequestInit) => {
      if (url.endsWith("/sessions") && init?.method === "POST") {
        return jsonResponse({ id: "s000001" }, 201);
      }
      if (url.endsWith("/state")) {
        return jsonResponse(engine.stateForGet, 200);
      }
      if (init?.method === "DELETE") {
        return jsonResponse({ closed: true }, 200);
      }
      return jsonResponse({ detail: "not found" }, 404);
    },
  };
  return engine;
}

function jsonResponse(body: unknown, status: number): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  } as unknown as Response;
}
