// Chat transcript model: UiMessage mirrors TurnRecord fields without
// reinterpretation; the DOM layer renders from this list only.

import { badgesFor } from "./cues.js";
import { TurnRecordPayload } from "./protocol.js";

export interface UiMessage {
  speaker: "customer" | "system";
  text: string;
  das: string;
  cues: string[];
  timestamp: number;
}

export class ChatLog {
  readonly messages: UiMessage[] = [];

  addTurn(record: TurnRecordPayload, options?: { showCustomer?: boolean }): UiMessage[] {
    const added: UiMessage[] = [];
    if (options?.showCustomer !== false) {
      added.push({
        speaker: "customer",
        text: record.customer_utterance.trim() ? record.customer_utterance : "(silent)",
        das: record.nlu.das,
        cues: [],
        timestamp: record.ts,
      });
    }
    added.push({
      speaker: "system",
      text: record.system_utterance,
      das: record.system_das,
      cues: record.cues.map((cue) => badgesFor(cue).during),
      timestamp: record.ts,
    });
    this.messages.push(...added);
    return added;
  }
}
