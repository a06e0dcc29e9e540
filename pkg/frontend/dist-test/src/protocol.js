"use strict";
// Wire types for the engine's HTTP + WebSocket API.
// These mirror the server payloads field by field; the UI never
// reinterprets them.
Object.defineProperty(exports, "__esModule", { value: true });
exports.isTurnRecord = isTurnRecord;
exports.parseFrame = parseFrame;
function isTurnRecord(value) {
    const record = value;
    return (!!record &&
        typeof record.system_utterance === "string" &&
        typeof record.system_das === "string" &&
        Array.isArray(record.cues));
}
function parseFrame(data) {
    try {
        const frame = JSON.parse(data);
        if (frame && typeof frame.type === "string") {
            return frame;
        }
    }
    catch {
        // fall through
    }
    return null;
}
