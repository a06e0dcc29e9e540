"use strict";
// App wiring against the fake engine: greeting bootstrap, bubbles,
// inspector refresh, busy gating, error banner.
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
const strict_1 = __importDefault(require("node:assert/strict"));
const node_test_1 = require("node:test");
const jsdom_1 = require("jsdom");
const app_js_1 = require("../src/app.js");
const fakes_js_1 = require("./fakes.js");
const PAGE = `<!doctype html><html><body>
  <div id="banner" class="banner hidden"></div>
  <div id="chat"></div>
  <div id="inspector"></div>
  <input id="utterance" type="text">
  <button id="send">Send</button>
  <input id="show-das" type="checkbox">
</body></html>`;
function flush() {
    return new Promise((resolve) => setTimeout(resolve, 5));
}
async function mountConnected() {
    const dom = new jsdom_1.JSDOM(PAGE);
    const engine = (0, fakes_js_1.fakeEngine)();
    const app = (0, app_js_1.mountApp)(dom.window.document, {
        baseUrl: "http://engine.test",
        fetchImpl: engine.fetchImpl,
        socketFactory: engine.socketFactory,
        reconnectDelayMs: 1,
    });
    await app.connect();
    const socket = engine.sockets[0];
    socket.emitOpen();
    return { dom, engine, app, socket };
}
(0, node_test_1.test)("connect opens a session and renders the greeting without a customer bubble", async () => {
    const { dom, socket } = await mountConnected();
    strict_1.default.equal(socket.sent.length, 1); // bootstrap silence
    socket.emitFrame({ type: "reply", payload: (0, fakes_js_1.turnRecord)() });
    await flush();
    const bubbles = dom.window.document.querySelectorAll(".bubble");
    strict_1.default.equal(bubbles.length, 1);
    strict_1.default.ok(bubbles[0].classList.contains("system"));
    strict_1.default.match(bubbles[0].textContent ?? "", /Welcome/);
});
(0, node_test_1.test)("a send renders customer and system bubbles and refreshes the inspector", async () => {
    const { dom, engine, socket } = await mountConnected();
    socket.emitFrame({ type: "reply", payload: (0, fakes_js_1.turnRecord)() });
    await flush();
    const doc = dom.window.document;
    engine.stateForGet = (0, fakes_js_1.snapshot)({ belief: { user_accompany: "child" }, turn_count: 2 });
    doc.getElementById("utterance").value =
        "I would like to bring my children to see the sights.";
    doc.getElementById("send").click();
    strict_1.default.equal(socket.sent.length, 2);
    socket.emitFrame({
        type: "reply",
        payload: (0, fakes_js_1.turnRecord)({
            customer_utterance: "I would like to bring my children to see the sights.",
            nlu: { das: "inform (user_accompany=child)", score: 1, source: "exact_corpus" },
            system_das: "request (user_accompany=?)",
            system_utterance: "Who would you like to tour with?",
            phase_before: "ProfileGathering",
            phase_after: "ProfileGathering",
        }),
    });
    await flush();
    const bubbles = doc.querySelectorAll(".bubble");
    strict_1.default.equal(bubbles.length, 3);
    const value = doc.querySelector('tr[data-key="user_accompany"] .inspector-value');
    strict_1.default.equal(value?.textContent, "child");
});
(0, node_test_1.test)("input is disabled while a turn is in flight", async () => {
    const { dom, socket } = await mountConnected();
    socket.emitFrame({ type: "reply", payload: (0, fakes_js_1.turnRecord)() });
    await flush();
    const doc = dom.window.document;
    const input = doc.getElementById("utterance");
    input.value = "hello";
    doc.getElementById("send").click();
    strict_1.default.ok(input.disabled);
    socket.emitFrame({ type: "reply", payload: (0, fakes_js_1.turnRecord)({ customer_utterance: "hello" }) });
    await flush();
    strict_1.default.ok(!input.disabled);
});
(0, node_test_1.test)("engine-down connect shows the error banner and does not crash", async () => {
    const dom = new jsdom_1.JSDOM(PAGE);
    const app = (0, app_js_1.mountApp)(dom.window.document, {
        baseUrl: "http://engine.test",
        fetchImpl: async () => {
            throw new Error("ECONNREFUSED");
        },
        socketFactory: () => {
            throw new Error("no socket");
        },
    });
    await app.connect();
    const banner = dom.window.document.getElementById("banner");
    strict_1.default.ok(!banner.classList.contains("hidden"));
    strict_1.default.match(banner.textContent ?? "", /Cannot reach the engine/);
    strict_1.default.ok(banner.querySelector("button.retry"));
});
(0, node_test_1.test)("retry button reconnects once the engine is back", async () => {
    const dom = new jsdom_1.JSDOM(PAGE);
    const engine = (0, fakes_js_1.fakeEngine)();
    let down = true;
    const app = (0, app_js_1.mountApp)(dom.window.document, {
        baseUrl: "http://engine.test",
        fetchImpl: async (url, init) => {
            if (down) {
                throw new Error("ECONNREFUSED");
            }
            return engine.fetchImpl(url, init);
        },
        socketFactory: engine.socketFactory,
    });
    await app.connect();
    const banner = dom.window.document.getElementById("banner");
    down = false;
    banner.querySelector("button.retry").click();
    await flush();
    strict_1.default.equal(app.sessionId, "s000001");
    strict_1.default.equal(engine.sockets.length, 1);
    strict_1.default.ok(banner.classList.contains("hidden"));
});
(0, node_test_1.test)("done error frame disables nothing but shows the banner", async () => {
    const { dom, socket } = await mountConnected();
    socket.emitFrame({ type: "error", payload: { code: "done" } });
    await flush();
    const banner = dom.window.document.getElementById("banner");
    strict_1.default.match(banner.textContent ?? "", /Session is over/);
});
(0, node_test_1.test)("debug toggle reveals dialogue act strings", async () => {
    const { dom, socket } = await mountConnected();
    socket.emitFrame({ type: "reply", payload: (0, fakes_js_1.turnRecord)() });
    await flush();
    const doc = dom.window.document;
    const chat = doc.getElementById("chat");
    strict_1.default.ok(!chat.classList.contains("show-das"));
    const toggle = doc.getElementById("show-das");
    toggle.checked = true;
    toggle.dispatchEvent(new dom.window.Event("change"));
    strict_1.default.ok(chat.classList.contains("show-das"));
    strict_1.default.equal(chat.querySelector(".bubble .das")?.textContent, "welcome (), self_introduction ()");
});
