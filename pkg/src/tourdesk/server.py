"""HTTP + WebSocket chat service around the engine.

REST: POST /sessions, POST /sessions/{id}/utterance, GET
/sessions/{id}/state, DELETE /sessions/{id}.  The socket at
/sessions/{id}/ws carries {type, payload} frames: "utterance" in,
"reply" and "state" out ("error" reports busy/done/unknown).
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.concurrency import run_in_threadpool
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .engine import (
    Engine,
    SessionBusyError,
    SessionDoneError,
    UnknownSessionError,
)


class UtteranceBody(BaseModel):
    text: str = ""


def create_app(engine: Engine, ui_dir=None) -> FastAPI:
    app = FastAPI(title="tourdesk", version="0.1.0")
    app.state.engine = engine

    @app.post("/sessions", status_code=201)
    def open_session():
        session = engine.open_session()
        return {"id": session.id}

    @app.post("/sessions/{session_id}/utterance")
    def post_utterance(session_id: str, body: UtteranceBody):
        try:
            record = engine.run_turn(session_id, body.text)
        except UnknownSessionError:
            raise HTTPException(404, "unknown session")
        except SessionBusyError:
            raise HTTPException(409, "a turn is already in flight for this session")
        except SessionDoneError:
            raise HTTPException(410, "session is over")
        return record.to_dict()

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        try:
            return engine.get_state(session_id)
        except UnknownSessionError:
            raise HTTPException(404, "unknown session")

    @app.delete("/sessions/{session_id}")
    def close_session(session_id: str):
        try:
            engine.close_session(session_id)
        except UnknownSessionError:
            raise HTTPException(404, "unknown session")
        return {"closed": True}

    @app.websocket("/sessions/{session_id}/ws")
    async def session_socket(websocket: WebSocket, session_id: str):
        await websocket.accept()
        try:
            engine.get_session(session_id)
        except UnknownSessionError:
            await websocket.send_json({"type": "error", "payload": {"code": "unknown_session"}})
            await websocket.close(code=4404)
            return
        try:
            while True:
                frame = await websocket.receive_json()
                if frame.get("type") != "utterance":
                    await websocket.send_json(
                        {"type": "error", "payload": {"code": "bad_frame"}}
                    )
                    continue
                text = str((frame.get("payload") or {}).get("text", ""))
                try:
                    record = await run_in_threadpool(engine.run_turn, session_id, text)
                except SessionBusyError:
                    await websocket.send_json({"type": "error", "payload": {"code": "busy"}})
                    continue
                except SessionDoneError:
                    await websocket.send_json({"type": "error", "payload": {"code": "done"}})
                    continue
                except UnknownSessionError:
                    await websocket.send_json(
                        {"type": "error", "payload": {"code": "unknown_session"}}
                    )
                    break
                await websocket.send_json({"type": "reply", "payload": record.to_dict()})
                await websocket.send_json(
                    {"type": "state", "payload": engine.get_state(session_id)}
                )
        except WebSocketDisconnect:
            return

    if ui_dir:
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
