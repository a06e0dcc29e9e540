"use strict";
// Engine client: REST session lifecycle plus the per-session socket.
// One turn in flight at a time, matching the engine's serialization
// contract; the socket reconnects with the stored session id, so a
// dropped connection resumes the same dialogue.
Object.defineProperty(exports, "__esModule", { value: true });
exports.SessionSocket = exports.EngineClient = void 0;
const protocol_js_1 = require("./protocol.js");
class EngineClient {
    baseUrl;
    fetchImpl;
    socketFactory;
    reconnectDelayMs;
    maxReconnectAttempts;
    constructor(options) {
        this.baseUrl = options.baseUrl.replace(/\/$/, "");
        this.fetchImpl =
            options.fetchImpl ?? ((url, init) => fetch(url, init));
        this.socketFactory =
            options.socketFactory ??
                ((url) => new WebSocket(url));
        this.reconnectDelayMs = options.reconnectDelayMs ?? 1000;
        this.maxReconnectAttempts = options.maxReconnectAttempts ?? 5;
    }
    async openSession() {
        const response = await this.fetchImpl(`${this.baseUrl}/sessions`, { method: "POST" });
        if (!response.ok) {
            throw new Error(`openSession failed: ${response.status}`);
        }
        const body = (await response.json());
        return body.id;
    }
    async getState(sessionId) {
        const response = await this.fetchImpl(`${this.baseUrl}/sessions/${sessionId}/state`);
        if (!response.ok) {
            throw new Error(`getState failed: ${response.status}`);
        }
        return (await response.json());
    }
    async closeSession(sessionId) {
        await this.fetchImpl(`${this.baseUrl}/sessions/${sessionId}`, { method: "DELETE" });
    }
    connect(sessionId, handlers) {
        const wsBase = this.baseUrl.replace(/^http/, "ws");
        return new SessionSocket(`${wsBase}/sessions/${sessionId}/ws`, this.socketFactory, handlers, this.reconnectDelayMs, this.maxReconnectAttempts);
    }
}
exports.EngineClient = EngineClient;
class SessionSocket {
    url;
    factory;
    handlers;
    reconnectDelayMs;
    maxReconnectAttempts;
    busy = false;
    closedByUser = false;
    reconnectAttempts = 0;
    socket = null;
    constructor(url, factory, handlers, reconnectDelayMs, maxReconnectAttempts) {
        this.url = url;
        this.factory = factory;
        this.handlers = handlers;
        this.reconnectDelayMs = reconnectDelayMs;
        this.maxReconnectAttempts = maxReconnectAttempts;
        this.open();
    }
    open() {
        const socket = this.factory(this.url);
        this.socket = socket;
        socket.onopen = () => {
            this.reconnectAttempts = 0;
            this.handlers.onOpen?.();
        };
        socket.onmessage = (event) => this.handleFrame((0, protocol_js_1.parseFrame)(String(event.data)));
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
    handleFrame(frame) {
        if (!frame) {
            return;
        }
        if (frame.type === "reply" && (0, protocol_js_1.isTurnRecord)(frame.payload)) {
            this.busy = false;
            this.handlers.onReply?.(frame.payload);
        }
        else if (frame.type === "state") {
            this.handlers.onState?.(frame.payload);
        }
        else if (frame.type === "error") {
            this.busy = false;
            const code = String(frame.payload?.code ?? "unknown");
            this.handlers.onError?.(code);
        }
    }
    sendUtterance(text) {
        if (this.busy || !this.socket) {
            return false;
        }
        this.busy = true;
        this.socket.send(JSON.stringify({ type: "utterance", payload: { text } }));
        return true;
    }
    close() {
        this.closedByUser = true;
        this.socket?.close();
    }
}
exports.SessionSocket = SessionSocket;
