"use strict";
// DOM wiring: chat pane, inspector pane, connection banner.
// Exported as a factory so tests can mount it inside jsdom against a
// real or fake engine.
Object.defineProperty(exports, "__esModule", { value: true });
exports.ChatApp = void 0;
exports.mountApp = mountApp;
const chat_js_1 = require("./chat.js");
const client_js_1 = require("./client.js");
const inspector_js_1 = require("./inspector.js");
class ChatApp {
    elements;
    log = new chat_js_1.ChatLog();
    sessionId = null;
    socket = null;
    client;
    bootstrapping = true;
    constructor(elements, options) {
        this.elements = elements;
        this.client = new client_js_1.EngineClient(options);
        this.elements.send.addEventListener("click", () => this.sendCurrentInput());
        this.elements.input.addEventListener("keydown", (event) => {
            if (event.key === "Enter") {
                this.sendCurrentInput();
            }
        });
        this.elements.debugToggle.addEventListener("change", () => {
            this.elements.chat.classList.toggle("show-das", this.elements.debugToggle.checked);
        });
    }
    async connect() {
        this.showBanner("");
        try {
            if (!this.sessionId) {
                this.sessionId = await this.client.openSession();
            }
        }
        catch (error) {
            this.showBanner(`Cannot reach the engine (${String(error)})`, { retry: true });
            return;
        }
        this.socket = this.client.connect(this.sessionId, {
            onOpen: () => {
                if (this.bootstrapping) {
                    // elicit the greeting turn; not a real customer message
                    this.bootstrapping = false;
                    this.socket?.sendUtterance("");
                    this.setBusy(true);
                }
            },
            onReply: (record) => this.handleReply(record),
            onState: () => {
                // inspector refresh uses GET /state below
            },
            onError: (code) => {
                this.setBusy(false);
                if (code === "done") {
                    this.showBanner("Session is over.");
                }
                else if (code === "busy") {
                    this.showBanner("Still thinking, give it a second.");
                }
                else {
                    this.showBanner(`Engine error: ${code}`);
                }
            },
            onGone: () => this.showBanner("Connection lost.", { retry: true }),
        });
    }
    async handleReply(record) {
        const showCustomer = record !== null && !this.isBootstrapTurn(record);
        const added = this.log.addTurn(record, { showCustomer });
        for (const message of added) {
            this.renderMessage(message);
        }
        this.setBusy(false);
        if (record.phase_after === "Done") {
            this.elements.input.disabled = true;
            this.elements.send.disabled = true;
        }
        if (this.sessionId) {
            try {
                const snapshot = await this.client.getState(this.sessionId);
                (0, inspector_js_1.renderInspector)(this.elements.inspector, snapshot);
            }
            catch {
                // session may have been closed server-side; banner stays as is
            }
        }
    }
    isBootstrapTurn(record) {
        return record.phase_before === "Greeting" && record.customer_utterance === "";
    }
    sendCurrentInput() {
        if (!this.socket || this.socket.busy) {
            return;
        }
        const text = this.elements.input.value;
        this.elements.input.value = "";
        if (this.socket.sendUtterance(text)) {
            this.setBusy(true);
        }
    }
    setBusy(busy) {
        this.elements.input.disabled = busy;
        this.elements.send.disabled = busy;
    }
    renderMessage(message) {
        const doc = this.elements.chat.ownerDocument;
        const bubble = doc.createElement("div");
        bubble.className = `bubble ${message.speaker}`;
        const text = doc.createElement("p");
        text.textContent = message.text;
        bubble.appendChild(text);
        for (const badge of message.cues) {
            const span = doc.createElement("span");
            span.className = "cue-badge";
            span.textContent = badge;
            bubble.appendChild(span);
        }
        const das = doc.createElement("code");
        das.className = "das";
        das.textContent = message.das;
        bubble.appendChild(das);
        this.elements.chat.appendChild(bubble);
        this.elements.chat.scrollTop = this.elements.chat.scrollHeight;
    }
    showBanner(text, options) {
        const banner = this.elements.banner;
        banner.textContent = text;
        banner.classList.toggle("hidden", text === "");
        if (text && options?.retry) {
            const doc = banner.ownerDocument;
            const button = doc.createElement("button");
            button.className = "retry";
            button.textContent = "Retry";
            button.addEventListener("click", () => {
                this.socket?.close();
                this.socket = null;
                this.bootstrapping = this.log.messages.length === 0;
                void this.connect();
            });
            banner.appendChild(button);
        }
    }
}
exports.ChatApp = ChatApp;
function mountApp(doc, options) {
    const elements = {
        chat: doc.getElementById("chat"),
        inspector: doc.getElementById("inspector"),
        input: doc.getElementById("utterance"),
        send: doc.getElementById("send"),
        banner: doc.getElementById("banner"),
        debugToggle: doc.getElementById("show-das"),
    };
    return new ChatApp(elements, options);
}
