"""WebSocket transport: one connection per session, frames processed in order.

All game logic lives in the pure session core; this layer only parses JSON,
stamps arrival times, and serializes replies.  Reconnecting with an existing
session id re-hydrates the client from a snapshot.
"""

from __future__ import annotations

import asyncio
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import FileResponse, PlainTextResponse

from . import protocol, session
from .goban import Color
from .session import SessionConfig, SessionState


@dataclass
class _Slot:
    state: SessionState
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)


class SessionRegistry:
    """In-memory sessions; each one's frames are handled under its own lock."""

    def __init__(self, config: SessionConfig, seed: int = 0):
        self.config = config
        self.seed = seed
        self._slots: dict[str, _Slot] = {}
        self._counter = 0

    def create(self, mode: str, human_color: Color) -> _Slot:
        self._counter += 1
        state = session.create_session(
            mode, human_color, self.config, seed=self.seed + self._counter
        )
        slot = _Slot(state=state)
        self._slots[state.session_id] = slot
        return slot

    def get(self, session_id: str) -> _Slot | None:
        return self._slots.get(session_id)


def create_app(
    config: SessionConfig | None = None,
    seed: int = 0,
    static_dir: str | Path | None = None,
) -> FastAPI:
    config = config or SessionConfig()
    app = FastAPI(title="neurogo")
    registry = SessionRegistry(config, seed=seed)
    app.state.registry = registry
    static_root = Path(static_dir) if static_dir else None

    @app.get("/healthz")
    async def healthz() -> PlainTextResponse:
        return PlainTextResponse("ok")

    if static_root is not None:

        @app.get("/")
        async def index() -> FileResponse:
            return FileResponse(static_root / "index.html")

        @app.get("/{asset_path:path}")
        async def asset(asset_path: str) -> FileResponse:
            target = (static_root / asset_path).resolve()
            if not str(target).startswith(str(static_root.resolve())) or not target.is_file():
                return FileResponse(static_root / "index.html")
            return FileResponse(target)

    @app.websocket("/ws")
    async def ws_endpoint(websocket: WebSocket) -> None:
        await websocket.accept()
        params = websocket.query_params
        resume = params.get("session")
        if resume:
            slot = registry.get(resume)
            if slot is None:
                await websocket.send_text(
                    protocol.dumps(
                        protocol.frame_error("UnknownType", f"no session {resume!r}")
                    )
                )
                await websocket.close()
                return
        else:
            mode = params.get("mode", "competitive")
            color = Color.BLACK if params.get("color", "B").upper() != "W" else Color.WHITE
            if mode not in session.MODES:
                await websocket.send_text(
                    protocol.dumps(protocol.frame_error("MalformedPayload", f"bad mode {mode!r}"))
                )
                await websocket.close()
                return
            slot = registry.create(mode, color)

        for frame in session.snapshot_frames(slot.state):
            await websocket.send_text(protocol.dumps(frame))

        try:
            while True:
                text = await websocket.receive_text()
                try:
                    inbound = json.loads(text)
                except json.JSONDecodeError as exc:
                    await websocket.send_text(
                        protocol.dumps(
                            protocol.frame_error("MalformedPayload", f"bad JSON: {exc.msg}")
                        )
                    )
                    continue
                async with slot.lock:
                    slot.state, outbound = session.handle_frame(
                        slot.state, inbound, now_s=time.monotonic()
                    )
                for frame in outbound:
                    await websocket.send_text(protocol.dumps(frame))
        except WebSocketDisconnect:
            return

    return app


def serve(addr: str, config: SessionConfig, seed: int = 0, static_dir: str | None = None) -> None:
    """Blocking uvicorn server; addr is host:port."""
    import uvicorn

    host, _, port = addr.rpartition(":")
    uvicorn.run(
        create_app(config, seed=seed, static_dir=static_dir),
        host=host or "127.0.0.1",
        port=int(port),
        log_level="info",
    )
