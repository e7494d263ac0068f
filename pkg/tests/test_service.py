import pytest
from fastapi.testclient import TestClient

from botbrain.service import create_app, create_mockllm_app

COLLECT_AND_RETURN = {
    "text": "collect the pink cake and return to base",
    "tasks": [
        {"type": "CollectCake", "params": {"color": "pink", "x_mm": 1125, "y_mm": 550}},
        {"type": "ReturnToBase", "params": {}},
    ],
}

FAST_CONFIG = {
    "nav": {"max_iters": 2000, "replan_every_steps": 8},
    "filter": {"n_particles": 300},
    "adapter_switch_ms": 0,
}


@pytest.fixture
def client():
    with TestClient(create_app()) as test_client:
        yield test_client


def create_session(client, **kwargs):
    body = {"seed": 5, "config": FAST_CONFIG, "realtime_factor": 0.0}
    body.update(kwargs)
    response = client.post("/sessions", json=body)
    assert response.status_code == 200
    return response.json()["id"]


class TestSessionLifecycle:
    def test_create_and_state(self, client):
        session_id = create_session(client)
        state = client.get(f"/sessions/{session_id}/state").json()["state"]
        assert state["t_ms"] == 0
        assert state["adapterMode"] == "btGen"
        assert {r["id"] for r in state["robots"]} >= {"r1", "r2"}

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope/state").status_code == 404

    def test_duplicate_id_conflict(self, client):
        create_session(client, session_id="dup")
        response = client.post("/sessions", json={"session_id": "dup"})
        assert response.status_code == 409

    def test_list_and_delete(self, client):
        session_id = create_session(client)
        ids = [s["id"] for s in client.get("/sessions").json()]
        assert session_id in ids
        assert client.delete(f"/sessions/{session_id}").status_code == 200
        assert client.get(f"/sessions/{session_id}/state").status_code == 404


class TestMessages:
    def test_command_dispatches_and_tree_visible(self, client):
        session_id = create_session(client)
        response = client.post(
            f"/sessions/{session_id}/messages",
            json={"kind": "command", "payload": COLLECT_AND_RETURN},
        )
        events = response.json()["events"]
        assert any(e["type"] == "dispatch" for e in events)
        trees = client.get(f"/sessions/{session_id}/tree").json()["trees"]
        assert trees["r1"] and "GrabCake" in trees["r1"]

    def test_advance_reaches_success(self, client):
        session_id = create_session(client)
        client.post(
            f"/sessions/{session_id}/messages",
            json={"kind": "command", "payload": COLLECT_AND_RETURN},
        )
        response = client.post(f"/sessions/{session_id}/advance", json={"duration_ms": 30000})
        events = response.json()["events"]
        resolved = [e for e in events if e["type"] == "treeResolved"]
        assert resolved and resolved[-1]["status"] == "Success"

    def test_question_answered(self, client):
        session_id = create_session(client)
        response = client.post(
            f"/sessions/{session_id}/messages",
            json={"kind": "question", "payload": {"text": "what is the score?"}},
        )
        events = response.json()["events"]
        answer = next(e for e in events if e["type"] == "answer")
        assert "score forecast" in answer["text"]

    def test_bad_kind_422(self, client):
        session_id = create_session(client)
        response = client.post(
            f"/sessions/{session_id}/messages", json={"kind": "poem", "payload": {}}
        )
        assert response.status_code == 422

    def test_event_polling_with_cursor(self, client):
        session_id = create_session(client)
        client.post(
            f"/sessions/{session_id}/messages",
            json={"kind": "command", "payload": COLLECT_AND_RETURN},
        )
        first = client.get(f"/sessions/{session_id}/events", params={"since": 0}).json()
        assert first["events"][0]["type"] == "init"
        again = client.get(
            f"/sessions/{session_id}/events", params={"since": first["next_cursor"]}
        ).json()
        assert again["events"] == []


class TestWebSocket:
    def test_backlog_and_live_events(self, client):
        session_id = create_session(client)
        client.post(
            f"/sessions/{session_id}/messages",
            json={"kind": "command", "payload": COLLECT_AND_RETURN},
        )
        with client.websocket_connect(f"/sessions/{session_id}/events") as ws:
            first = ws.receive_json()
            assert first["type"] == "init"
            assert first["seq"] == 0
            seen = [first]
            while seen[-1]["type"] != "dispatch":
                seen.append(ws.receive_json())
            client.post(f"/sessions/{session_id}/advance", json={"duration_ms": 2000})
            event = ws.receive_json()
            assert event["seq"] == len(seen)

    def test_unknown_session_closes(self, client):
        with pytest.raises(Exception):
            with client.websocket_connect("/sessions/ghost/events") as ws:
                ws.receive_json()


class TestRealtimePump:
    def test_pump_advances_without_explicit_stepping(self, client):
        import time

        session_id = create_session(client, realtime_factor=50.0)
        deadline = time.monotonic() + 5.0
        t_ms = 0
        while time.monotonic() < deadline:
            t_ms = client.get(f"/sessions/{session_id}/state").json()["state"]["t_ms"]
            if t_ms > 0:
                break
            time.sleep(0.05)
        assert t_ms > 0


class TestMockLlm:
    def test_generate_round_trip_through_remote_backend(self):
        import httpx

        from botbrain.bt import default_registry
        from botbrain.strategy import Command, RemoteBackend, TaskSpec, TaskType

        class TestClientTransport(httpx.BaseTransport):
            def __init__(self, test_client):
                self.test_client = test_client

            def handle_request(self, request):
                response = self.test_client.request(
                    request.method,
                    request.url.path,
                    content=request.read(),
                    headers=dict(request.headers),
                )
                return httpx.Response(
                    response.status_code, headers=response.headers, content=response.content
                )

        cmd = Command(
            text="move to (500, 700)",
            tasks=(TaskSpec(TaskType.MOVE_TO, {"x_mm": 500, "y_mm": 700}),),
        )
        with TestClient(create_mockllm_app()) as mock:
            backend = RemoteBackend("http://mock", transport=TestClientTransport(mock))
            tree = backend.generate(cmd, default_registry())
        leaf_ids = [n.id for n in tree.iter_all_nodes() if n.id and n.kind.value == "Action"]
        assert "MoveTo" in leaf_ids

    def test_generate_unparseable_prompt_422(self):
        mock = TestClient(create_mockllm_app())
        response = mock.post("/generate", json={"prompt": "sing a song", "registry": {}})
        assert response.status_code == 422

    def test_answer_endpoint(self):
        from botbrain.qa import GripperView, OutcomeContext, RobotSensors

        context = OutcomeContext(
            match_time_s=10.0,
            tasks=[],
            robot=RobotSensors("r1", 100.0, 200.0, 0.0, [None, None, None], 2),
            score_forecast=4,
        )
        mock = TestClient(create_mockllm_app())
        response = mock.post(
            "/answer", json={"contextXml": context.to_xml(), "question": "what is the score?"}
        )
        assert response.status_code == 200
        assert "4" in response.json()["text"]

    def test_faulty_mock_can_drop_tasks(self):
        mock = TestClient(create_mockllm_app("faulty", drop_prob=1.0, seed=3))
        response = mock.post(
            "/generate",
            json={"prompt": "move to (500, 700)", "registry": {}},
        )
        assert "SubTree" not in response.json()["xml"]
