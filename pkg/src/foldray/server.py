"""
WebSocket service: one live session per connection, speaking the line
protocol the browser front end consumes.

All frames are text frames holding one JSON message.

  client -> server:
    {"type": "input", "frame": {...InputFrame}}   step the session
    {"type": "reset"}                             discard state, keep scene

  server -> client:
    {"type": "scene", ...}        once, immediately after connect
    {"type": "render", ...}       one per input frame
    {"type": "event", ...}        zero or more per input frame
    {"type": "error", "message"}  then the connection closes

The event messages are the trace event log verbatim plus the "type" field,
so a wire client and `foldray run` see byte-identical event streams once
framing is stripped.
"""

from __future__ import annotations

import asyncio
import json
import mimetypes
import threading
from pathlib import Path
from typing import Optional

from websockets.asyncio.server import serve
from websockets.datastructures import Headers
from websockets.exceptions import ConnectionClosed
from websockets.http11 import Response

from .canon import canonical_json, pose_json
from .folding import FoldConfig
from .scene import Scene, canonical_scene_dict, scene_digest
from .session import (
    TraceError,
    event_to_dict,
    frame_from_dict,
    new_session,
    render_to_dict,
)


def scene_message(scene: Scene) -> str:
    doc = canonical_scene_dict(scene)
    return canonical_json(
        {
            "type": "scene",
            "digest": scene_digest(scene),
            "spawn": doc["spawn"],
            "hand_offsets": doc["hand_offsets"],
            "objects": doc["objects"],
        }
    )


async def _handle(connection, scene: Scene, config: Optional[FoldConfig]):
    await connection.send(scene_message(scene))
    session = new_session(scene, config)
    try:
        async for message in connection:
            try:
                doc = json.loads(message)
                if not isinstance(doc, dict):
                    raise ValueError("message must be a JSON object")
                kind = doc.get("type")
                if kind == "input":
                    frame = frame_from_dict(doc["frame"])
                    render, events = session.step(frame)
                    await connection.send(
                        canonical_json({"type": "render", **render_to_dict(render)})
                    )
                    for event in events:
                        await connection.send(
                            canonical_json({"type": "event", **event_to_dict(event)})
                        )
                elif kind == "reset":
                    session = new_session(scene, config)
                else:
                    raise ValueError(f"unknown message type {kind!r}")
            except (KeyError, ValueError, TraceError, json.JSONDecodeError) as exc:
                await connection.send(
                    canonical_json({"type": "error", "message": str(exc)})
                )
                await connection.close(code=1002, reason="protocol error")
                return
    except ConnectionClosed:
        pass


def _static_responder(ui_dir: Path):
    root = ui_dir.resolve()

    def respond(connection, request):
        if "Upgrade" in request.headers:
            return None  # proceed with the WebSocket handshake
        path = request.path.split("?", 1)[0]
        rel = path.lstrip("/") or "index.html"
        candidate = (root / rel).resolve()
        if not str(candidate).startswith(str(root)) or not candidate.is_file():
            return connection.respond(404, "not found\n")
        ctype = mimetypes.guess_type(candidate.name)[0] or "application/octet-stream"
        body = candidate.read_bytes()
        headers = Headers(
            [("Content-Type", ctype), ("Content-Length", str(len(body)))]
        )
        return Response(200, "OK", headers, body)

    return respond


class SessionServer:
    """
    Owns the event loop thread. Each connection gets an isolated session;
    closing a connection discards its session.
    """

    def __init__(
        self,
        scene: Scene,
        host: str = "127.0.0.1",
        port: int = 0,
        config: Optional[FoldConfig] = None,
        ui_dir: Optional[str] = None,
    ):
        self.scene = scene
        self.host = host
        self.port = port
        self.config = config
        self.ui_dir = Path(ui_dir) if ui_dir else None
        self._loop: Optional[asyncio.AbstractEventLoop] = None
        self._thread: Optional[threading.Thread] = None
        self._server = None
        self._started = threading.Event()

    async def _run(self):
        process_request = _static_responder(self.ui_dir) if self.ui_dir else None
        async with serve(
            lambda conn: _handle(conn, self.scene, self.config),
            self.host,
            self.port,
            process_request=process_request,
        ) as server:
            self._server = server
            self.port = server.sockets[0].getsockname()[1]
            self._started.set()
            await asyncio.get_running_loop().create_future()  # run until cancelled

    def start(self) -> "SessionServer":
        def runner():
            self._loop = asyncio.new_event_loop()
            asyncio.set_event_loop(self._loop)
            self._task = self._loop.create_task(self._run())
            try:
                self._loop.run_until_complete(self._task)
            except asyncio.CancelledError:
                pass
            finally:
                self._loop.close()

        self._thread = threading.Thread(target=runner, daemon=True)
        self._thread.start()
        if not self._started.wait(timeout=10):
            raise RuntimeError("server did not start")
        return self

    def stop(self):
        if self._loop is not None and self._loop.is_running():
            self._loop.call_soon_threadsafe(self._task.cancel)
        if self._thread is not None:
            self._thread.join(timeout=10)

    @property
    def url(self) -> str:
        return f"ws://{self.host}:{self.port}"


def serve_forever(
    scene: Scene,
    host: str = "127.0.0.1",
    port: int = 8765,
    config: Optional[FoldConfig] = None,
    ui_dir: Optional[str] = None,
):
    """Blocking entry point used by the CLI."""

    async def runner():
        process_request = _static_responder(Path(ui_dir)) if ui_dir else None
        async with serve(
            lambda conn: _handle(conn, scene, config),
            host,
            port,
            process_request=process_request,
        ) as server:
            bound = server.sockets[0].getsockname()[1]
            print(f"listening on ws://{host}:{bound}")
            if ui_dir:
                print(f"serving UI files from {ui_dir} on http://{host}:{bound}/")
            await asyncio.get_running_loop().create_future()

    asyncio.run(runner())
