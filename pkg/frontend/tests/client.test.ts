// Session client: turn serialization, reconnect with the same id,
// error frames.

import assert from "node:assert/strict";
import { test } from "node:test";

import { EngineClient } from "../src/client.js";
import { fakeEngine, turnRecord } from "./fakes.js";

function makeClient(engine = fakeEngine()) {
  const client = new EngineClient({
    baseUrl: "http://engine.test",
    fetchImpl: engine.fetchImpl,
    socketFactory: engine.socketFactory,
    reconnectDelayMs: 1,
    maxReconnectAttempts: 3,
  });
  return { client, engine };
}

test("openSession posts and returns the id", async () => {
  const { client } = makeClient();
  assert.equal(await client.openSession(), "s000001");
});

test("getState returns the snapshot", async () => {
  const { client, engine } = makeClient();
  engine.stateForGet.belief = { user_accompany: "child" };
  const state = await client.getState("s000001");
  assert.equal(state.belief.user_accompany, "child");
});

test("socket url derives from the base url", () => {
  const { client, engine } = makeClient();
  client.connect("s000001", {});
  assert.equal(engine.sockets[0].url, "ws://engine.test/sessions/s000001/ws");
});

test("only one utterance may be in flight", () => {
  const { client, engine } = makeClient();
  const session = client.connect("s000001", {});
  const socket = engine.sockets[0];
  socket.emitOpen();
  assert.ok(session.sendUtterance("first"));
  assert.ok(!session.sendUtterance("second while busy"));
  assert.equal(socket.sent.length, 1);
  socket.emitFrame({ type: "reply", payload: turnRecord() });
  assert.ok(session.sendUtterance("after reply"));
  assert.equal(socket.sent.length, 2);
});

test("reply and state frames reach their handlers", () => {
  const { client, engine } = makeClient();
  const replies: string[] = [];
  const phases: string[] = [];
  const session = client.connect("s000001", {
    onReply: (record) => replies.push(record.system_utterance),
    onState: (snapshot) => phases.push(snapshot.phase),
  });
  const socket = engine.sockets[0];
  socket.emitOpen();
  session.sendUtterance("hi");
  socket.emitFrame({ type: "reply", payload: turnRecord() });
  socket.emitFrame({ type: "state", payload: { phase: "ProfileGathering" } });
  assert.equal(replies.length, 1);
  assert.deepEqual(phases, ["ProfileGathering"]);
});

test("error frames clear the busy flag and surface the code", () => {
  const { client, engine } = makeClient();
  const codes: string[] = [];
  const session = client.connect("s000001", { onError: (code) => codes.push(code) });
  const socket = engine.sockets[0];
  socket.emitOpen();
  session.sendUtterance("hi");
  socket.emitFrame({ type: "error", payload: { code: "busy" } });
  assert.deepEqual(codes, ["busy"]);
  assert.ok(!session.busy);
});

test("a dropped connection reconnects to the same session", async () => {
  const { client, engine } = makeClient();
  let opens = 0;
  client.connect("s000001", { onOpen: () => (opens += 1) });
  const first = engine.sockets[0];
  first.emitOpen();
  first.dropConnection();
  await new Promise((resolve) => setTimeout(resolve, 10));
  assert.equal(engine.sockets.length, 2);
  assert.equal(engine.sockets[1].url, first.url);
  engine.sockets[1].emitOpen();
  assert.equal(opens, 2);
});

test("reconnect gives up after the attempt budget", async () => {
  const { client, engine } = makeClient();
  let gone = false;
  client.connect("s000001", { onGone: () => (gone = true) });
  for (let i = 0; i < 4; i += 1) {
    engine.sockets[engine.sockets.length - 1].dropConnection();
    await new Promise((resolve) => setTimeout(resolve, 5));
  }
  assert.ok(gone);
  assert.equal(engine.sockets.length, 4); // initial + 3 retries
});

test("user close does not reconnect", async () => {
  const { client, engine } = makeClient();
  const session = client.connect("s000001", {});
  session.close();
  await new Promise((resolve) => setTimeout(resolve, 10));
  assert.equal(engine.sockets.length, 1);
});
