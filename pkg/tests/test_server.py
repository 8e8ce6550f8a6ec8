import json

import pytest
from websockets.sync.client import connect

from foldray.assets import load_bundled_scene, trace_path
from foldray.canon import canonical_json
from foldray.server import SessionServer
from foldray.session import (
    event_json,
    frame_to_dict,
    load_trace_file,
    replay_events,
)

IDLE_FRAME = {
    "seq": 0,
    "head": {"position": [0, 0, 0], "orientation": [1, 0, 0, 0]},
    "left": {"position": [-0.2, -0.25, -0.3], "orientation": [1, 0, 0, 0]},
    "right": {"position": [0.2, -0.25, -0.3], "orientation": [1, 0, 0, 0]},
    "buttons": {},
}


@pytest.fixture(scope="module")
def wall_server():
    server = SessionServer(load_bundled_scene("wall_room")).start()
    yield server
    server.stop()


def send(ws, doc):
    ws.send(canonical_json(doc))


def test_scene_message_arrives_first(wall_server):
    with connect(wall_server.url) as ws:
        doc = json.loads(ws.recv())
        assert doc["type"] == "scene"
        assert len(doc["objects"]) == 2
        assert doc["spawn"]["position"] == [0, 0, 0]
        assert "digest" in doc
        assert "hand_offsets" in doc


def test_idle_frame_renders_without_events(wall_server):
    with connect(wall_server.url) as ws:
        ws.recv()  # scene
        send(ws, {"type": "input", "frame": IDLE_FRAME})
        doc = json.loads(ws.recv())
        assert doc["type"] == "render"
        assert doc["seq"] == 0
        assert doc["window"] is None
        assert len(doc["main_polyline"]) >= 2
        # nothing else queued: a second input's render is the next message
        frame2 = dict(IDLE_FRAME, seq=1)
        send(ws, {"type": "input", "frame": frame2})
        doc2 = json.loads(ws.recv())
        assert doc2["type"] == "render" and doc2["seq"] == 1


def test_transport_parity_with_trace_replay(wall_server):
    frames = load_trace_file(trace_path("wall_room_select"))
    expected = [
        event_json(e) for e in replay_events(load_bundled_scene("wall_room"), frames)
    ]
    wire_events = []
    with connect(wall_server.url) as ws:
        ws.recv()
        renders = 0
        for frame in frames:
            send(ws, {"type": "input", "frame": frame_to_dict(frame)})
        while renders < len(frames):
            doc = json.loads(ws.recv())
            if doc["type"] == "render":
                renders += 1
            elif doc["type"] == "event":
                doc.pop("type")
                wire_events.append(canonical_json(doc))
    assert wire_events == expected


def test_two_connections_are_isolated(wall_server):
    frames = load_trace_file(trace_path("wall_room_select"))
    fold_frame = frame_to_dict(frames[2])  # the primary press that folds
    with connect(wall_server.url) as a, connect(wall_server.url) as b:
        a.recv()
        b.recv()
        # session A folds
        for f in frames[:3]:
            send(a, {"type": "input", "frame": frame_to_dict(f)})
        msgs = [json.loads(a.recv()) for _ in range(4)]  # 3 renders + 1 event
        assert any(m["type"] == "event" and m["event"] == "fold_created" for m in msgs)
        window_a = [m for m in msgs if m["type"] == "render"][-1]["window"]
        assert window_a is not None
        # session B never folded: same input seq works and shows no window
        send(b, {"type": "input", "frame": IDLE_FRAME})
        doc = json.loads(b.recv())
        assert doc["type"] == "render" and doc["window"] is None


def test_reset_discards_session_state(wall_server):
    frames = load_trace_file(trace_path("wall_room_select"))
    with connect(wall_server.url) as ws:
        ws.recv()
        for f in frames[:3]:
            send(ws, {"type": "input", "frame": frame_to_dict(f)})
        for _ in range(4):
            ws.recv()
        send(ws, {"type": "reset"})
        # seq restarts after reset, and the fold chain is gone
        send(ws, {"type": "input", "frame": IDLE_FRAME})
        doc = json.loads(ws.recv())
        assert doc["type"] == "render" and doc["window"] is None


def test_malformed_message_errors_and_closes(wall_server):
    with connect(wall_server.url) as ws:
        ws.recv()
        ws.send("{not json")
        doc = json.loads(ws.recv())
        assert doc["type"] == "error"
        with pytest.raises(Exception):
            ws.recv()


def test_unknown_type_errors(wall_server):
    with connect(wall_server.url) as ws:
        ws.recv()
        send(ws, {"type": "mystery"})
        doc = json.loads(ws.recv())
        assert doc["type"] == "error"
        assert "mystery" in doc["message"]


def test_out_of_order_seq_errors(wall_server):
    with connect(wall_server.url) as ws:
        ws.recv()
        send(ws, {"type": "input", "frame": IDLE_FRAME})
        ws.recv()
        send(ws, {"type": "input", "frame": IDLE_FRAME})  # same seq again
        doc = json.loads(ws.recv())
        assert doc["type"] == "error"


def test_static_ui_files_served(tmp_path):
    (tmp_path / "index.html").write_text("<html>demo</html>")
    server = SessionServer(
        load_bundled_scene("wall_room"), ui_dir=str(tmp_path)
    ).start()
    try:
        import urllib.request

        with urllib.request.urlopen(f"http://127.0.0.1:{server.port}/") as resp:
            assert resp.status == 200
            assert b"demo" in resp.read()
        with connect(server.url) as ws:  # websocket still works alongside
            assert json.loads(ws.recv())["type"] == "scene"
        with pytest.raises(Exception):
            urllib.request.urlopen(f"http://127.0.0.1:{server.port}/missing.js")
    finally:
        server.stop()
