"use strict";
// Session client: turn serialization, reconnect with the same id,
// error frames.
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
const strict_1 = __importDefault(require("node:assert/strict"));
const node_test_1 = require("node:test");
const client_js_1 = require("../src/client.js");
const fakes_js_1 = require("./fakes.js");
function makeClient(engine = (0, fakes_js_1.fakeEngine)()) {
    const client = new client_js_1.EngineClient({
        baseUrl: "http://engine.test",
        fetchImpl: engine.fetchImpl,
        socketFactory: engine.socketFactory,
        reconnectDelayMs: 1,
        maxReconnectAttempts: 3,
    });
    return { client, engine };
}
(0, node_test_1.test)("openSession posts and returns the id", async () => {
    const { client } = makeClient();
    strict_1.default.equal(await client.openSession(), "s000001");
});
(0, node_test_1.test)("getState returns the snapshot", async () => {
    const { client, engine } = makeClient();
    engine.stateForGet.belief = { user_accompany: "child" };
    const state = await client.getState("s000001");
    strict_1.default.equal(state.belief.user_accompany, "child");
});
(0, node_test_1.test)("socket url derives from the base url", () => {
    const { client, engine } = makeClient();
    client.connect("s000001", {});
    strict_1.default.equal(engine.sockets[0].url, "ws://engine.test/sessions/s000001/ws");
});
(0, node_test_1.test)("only one utterance may be in flight", () => {
    const { client, engine } = makeClient();
    const session = client.connect("s000001", {});
    const socket = engine.sockets[0];
    socket.emitOpen();
    strict_1.default.ok(session.sendUtterance("first"));
    strict_1.default.ok(!session.sendUtterance("second while busy"));
    strict_1.default.equal(socket.sent.length, 1);
    socket.emitFrame({ type: "reply", payload: (0, fakes_js_1.turnRecord)() });
    strict_1.default.ok(session.sendUtterance("after reply"));
    strict_1.default.equal(socket.sent.length, 2);
});
(0, node_test_1.test)("reply and state frames reach their handlers", () => {
    const { client, engine } = makeClient();
    const replies = [];
    const phases = [];
    const session = client.connect("s000001", {
        onReply: (record) => replies.push(record.system_utterance),
        onState: (snapshot) => phases.push(snapshot.phase),
    });
    const socket = engine.sockets[0];
    socket.emitOpen();
    session.sendUtterance("hi");
    socket.emitFrame({ type: "reply", payload: (0, fakes_js_1.turnRecord)() });
    socket.emitFrame({ type: "state", payload: { phase: "ProfileGathering" } });
    strict_1.default.equal(replies.length, 1);
    strict_1.default.deepEqual(phases, ["ProfileGathering"]);
});
(0, node_test_1.test)("error frames clear the busy flag and surface the code", () => {
    const { client, engine } = makeClient();
    const codes = [];
    const session = client.connect("s000001", { onError: (code) => codes.push(code) });
    const socket = engine.sockets[0];
    socket.emitOpen();
    session.sendUtterance("hi");
    socket.emitFrame({ type: "error", payload: { code: "busy" } });
    strict_1.default.deepEqual(codes, ["busy"]);
    strict_1.default.ok(!session.busy);
});
(0, node_test_1.test)("a dropped connection reconnects to the same session", async () => {
    const { client, engine } = makeClient();
    let opens = 0;
    client.connect("s000001", { onOpen: () => (opens += 1) });
    const first = engine.sockets[0];
    first.emitOpen();
    first.dropConnection();
    await new Promise((resolve) => setTimeout(resolve, 10));
    strict_1.default.equal(engine.sockets.length, 2);
    strict_1.default.equal(engine.sockets[1].url, first.url);
    engine.sockets[1].emitOpen();
    strict_1.default.equal(opens, 2);
});
(0, node_test_1.test)("reconnect gives up after the attempt budget", async () => {
    const { client, engine } = makeClient();
    let gone = false;
    client.connect("s000001", { onGone: () => (gone = true) });
    for (let i = 0; i < 4; i += 1) {
        engine.sockets[engine.sockets.length - 1].dropConnection();
        await new Promise((resolve) => setTimeout(resolve, 5));
    }
    strict_1.default.ok(gone);
    strict_1.default.equal(engine.sockets.length, 4); // initial + 3 retries
});
(0, node_test_1.test)("user close does not reconnect", async () => {
    const { client, engine } = makeClient();
    const session = client.connect("s000001", {});
    session.close();
    await new Promise((resolve) => setTimeout(resolve, 10));
    strict_1.default.equal(engine.sockets.length, 1);
});
