// DOM wiring: chat pane, inspector pane, connection banner.
// Exported as a factory so tests can mount it inside jsdom against a
// real or fake engine.

import { ChatLog, UiMessage } from "./chat.js";
import { EngineClient, EngineClientOptions, SessionSocket } from "./client.js";
import { renderInspector } from "./inspector.js";
import { StateSnapshot, TurnRecordPayload } from "./protocol.js";

export interface AppElements {
  chat: HTMLElement;
  inspector: HTMLElement;
  input: HTMLInputElement;
  send: HTMLButtonElement;
  banner: HTMLElement;
  debugToggle: HTMLInputElement;
}

export class ChatApp {
  readonly log = new ChatLog();
  sessionId: string | null = null;
  socket: SessionSocket | null = null;

  private readonly client: EngineClient;
  private bootstrapping = true;

  constructor(private readonly elements: AppElements, options: EngineClientOptions) {
    this.client = new EngineClient(options);
    this.elements.send.addEventListener("click", () => this.sendCurrentInput());
    this.elements.input.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter") {
        this.sendCurrentInput();
      }
    });
    this.elements.debugToggle.addEventListener("change", () => {
      this.elements.chat.classList.toggle("show-das", this.elements.debugToggle.checked);
    });
  }

  async connect(): Promise<void> {
    this.showBanner("");
    try {
      if (!this.sessionId) {
        this.sessionId = await this.client.openSession();
      }
    } catch (error) {
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
        } else if (code === "busy") {
          this.showBanner("Still thinking, give it a second.");
        } else {
          this.showBanner(`Engine error: ${code}`);
        }
      },
      onGone: () => this.showBanner("Connection lost.", { retry: true }),
    });
  }

  private async handleReply(record: TurnRecordPayload): Promise<void> {
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
        const snapshot: StateSnapshot = await this.client.getState(this.sessionId);
        renderInspector(this.elements.inspector, snapshot);
      } catch {
        // session may have been closed server-side; banner stays as is
      }
    }
  }

  private isBootstrapTurn(record: TurnRecordPayload): boolean {
    return record.phase_before === "Greeting" && record.customer_utterance === "";
  }

  private sendCurrentInput(): void {
    if (!this.socket || this.socket.busy) {
      return;
    }
    const text = this.elements.input.value;
    this.elements.input.value = "";
    if (this.socket.sendUtterance(text)) {
      this.setBusy(true);
    }
  }

  private setBusy(busy: boolean): void {
    this.elements.input.disabled = busy;
    this.elements.send.disabled = busy;
  }

  private renderMessage(message: UiMessage): void {
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

  private showBanner(text: string, options?: { retry?: boolean }): void {
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

export function mountApp(doc: Document, options: EngineClientOptions): ChatApp {
  const elements: AppElements = {
    chat: doc.getElementById("chat") as HTMLElement,
    inspector: doc.getElementById("inspector") as HTMLElement,
    input: doc.getElementById("utterance") as HTMLInputElement,
    send: doc.getElementById("send") as HTMLButtonElement,
    banner: doc.getElementById("banner") as HTMLElement,
    debugToggle: doc.getElementById("show-das") as HTMLInputElement,
  };
  return new ChatApp(elements, options);
}
