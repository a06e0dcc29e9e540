// Wire types for the engine's HTTP + WebSocket API.
// These mirror the server payloads field by field; the UI never
// reinterprets them.

export interface CuePayload {
  intent: string;
  during: { expression: string; motion: string };
  after: { expression: string; motion: string };
}

export interface NluPayload {
  das: string;
  score: number;
  source: string;
}

export interface TurnRecordPayload {
  type: "turn";
  customer_utterance: string;
  nlu: NluPayload;
  system_das: string;
  system_utterance: string;
  cues: CuePayload[];
  phase_before: string;
  phase_after: string;
  latency_ms: number;
  ts: number;
}

export interface HistoryEntryPayload {
  speaker: string;
  das: string;
  utterance: string;
}

export interface StateSnapshot {
  profile: Record<string, string>;
  belief: Record<string, string>;
  focused_attraction: string | null;
  pending_request: string[];
  pending_confirmation: string | null;
  confirmation_result: boolean | null;
  history: HistoryEntryPayload[];
  phase: string;
  turn_count: number;
  silence_streak: number;
  farewell_requested: boolean;
  recommendation_rejected: boolean;
  introduced: boolean;
  requested_slots: string[];
  recommended_attractions: string[];
}

export type WsFrameType = "utterance" | "reply" | "state" | "error";

export interface WsFrame {
  type: WsFrameType;
  payload: unknown;
}

export function isTurnRecord(value: unknown): value is TurnRecordPayload {
  const record = value as TurnRecordPayload;
  return (
    !!record &&
    typeof record.system_utterance === "string" &&
    typeof record.system_das === "string" &&
    Array.isArray(record.cues)
  );
}

export function parseFrame(data: string): WsFrame | null {
  try {
    const frame = JSON.parse(data);
    if (frame && typeof frame.type === "string") {
      return frame as WsFrame;
    }
  } catch {
    // fall through
  }
  return null;
}
