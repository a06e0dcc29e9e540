"use strict";
// Chat transcript model: UiMessage mirrors TurnRecord fields without
// reinterpretation; the DOM layer renders from this list only.
Object.defineProperty(exports, "__esModule", { value: true });
exports.ChatLog = void 0;
const cues_js_1 = require("./cues.js");
class ChatLog {
    messages = [];
    addTurn(record, options) {
        const added = [];
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
            cues: record.cues.map((cue) => (0, cues_js_1.badgesFor)(cue).during),
            timestamp: record.ts,
        });
        this.messages.push(...added);
        return added;
    }
}
exports.ChatLog = ChatLog;
