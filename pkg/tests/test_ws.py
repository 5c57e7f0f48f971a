"""WebSocket layer: in-process ASGI sessions speak the exact frame schema."""

import json

import pytest
from fastapi.testclient import TestClient

from neurogo.engine import EngineConfig
from neurogo.session import SessionConfig
from neurogo.synth import SynthConfig
from neurogo.ws import create_app

CONFIG = SessionConfig(
    board_size=9,
    synth=SynthConfig(snr_db=60.0),
    engine=EngineConfig(playouts=200),
)


@pytest.fixture
def client():
    return TestClient(create_app(CONFIG, seed=5))


def recv(ws):
    return json.loads(ws.receive_text())


def test_connect_sends_hello_and_snapshot(client):
    with client.websocket_connect("/ws?mode=competitive&color=B") as ws:
        hello = recv(ws)
        board = recv(ws)
        assert hello["type"] == "hello"
        assert hello["board_size"] == 9
        assert hello["human_color"] == "B"
        assert board["type"] == "board_state"
        assert board["grid"] == "." * 81
        assert board["cursor"] == {"x": 4, "y": 4}


def test_full_turn_over_socket(client):
    with client.websocket_connect("/ws") as ws:
        recv(ws), recv(ws)
        ws.send_text(json.dumps({"type": "impedance_report", "kohm": {"O1": 100, "O2": 100}}))
        assert recv(ws)["type"] == "board_state"
        ws.send_text(json.dumps({"type": "command", "command": "select"}))
        kinds = [recv(ws)["type"] for _ in range(5)]
        assert kinds == ["move_played", "board_state", "move_played", "board_state", "assessment"]


def test_reconnect_rehydrates(client):
    with client.websocket_connect("/ws") as ws:
        hello = recv(ws)
        recv(ws)
        session_id = hello["session_id"]
        ws.send_text(json.dumps({"type": "impedance_report", "kohm": {"O1": 100, "O2": 100}}))
        recv(ws)

    with client.websocket_connect(f"/ws?session={session_id}") as ws:
        hello2 = recv(ws)
        board = recv(ws)
        assert hello2["session_id"] == session_id
        assert board["type"] == "board_state"


def test_unknown_session_rejected(client):
    with client.websocket_connect("/ws?session=nope") as ws:
        frame = recv(ws)
        assert frame["type"] == "error"


def test_bad_json_and_bad_frames_answered_not_dropped(client):
    with client.websocket_connect("/ws") as ws:
        recv(ws), recv(ws)
        ws.send_text("{not json")
        err = recv(ws)
        assert err["type"] == "error" and err["code"] == "MalformedPayload"
        ws.send_text(json.dumps({"type": "warp"}))
        err = recv(ws)
        assert err["type"] == "error" and err["code"] == "UnknownType"
        # the session is still alive
        ws.send_text(json.dumps({"type": "hello"}))
        assert recv(ws)["type"] == "hello"


def test_healthz(client):
    assert client.get("/healthz").text == "ok"
