"""HTTP/WebSocket service around orchestrator sessions.

Each session is mutated only under its own lock: message handling, time
advancement and the optional realtime pump are serialized per session,
while distinct sessions run independently.
"""

from __future__ import annotations

import asyncio
import uuid

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect

from ..orchestrator import OrchestratorConfig, Session
from ..world import default_scenario_dict
from .schemas import (
    AdvanceRequest,
    AdvanceResponse,
    CreateSessionRequest,
    CreateSessionResponse,
    EventsResponse,
    MessageRequest,
    MessageResponse,
    SessionSummary,
    StateResponse,
    TreesResponse,
)

PUMP_INTERVAL_S = 0.05


class ManagedSession:
    def __init__(self, session: Session, realtime_factor: float):
        self.session = session
        self.realtime_factor = realtime_factor
        self.lock = asyncio.Lock()
        self.subscribers: list[asyncio.Queue] = []
        self.cursor = len(session.event_log)
        self.pump_task: asyncio.Task | None = None

    def broadcast_new_events(self) -> None:
        log = self.session.event_log
        while self.cursor < len(log):
            event = dict(log[self.cursor])
            event["seq"] = self.cursor
            self.cursor += 1
            for queue in list(self.subscribers):
                queue.put_nowait(event)

    async def pump(self) -> None:
        carry = 0.0
        try:
            while True:
                await asyncio.sleep(PUMP_INTERVAL_S)
                carry += self.realtime_factor * PUMP_INTERVAL_S * 1000.0
                steps = int(carry // self.session.config.dt_ms)
                carry -= steps * self.session.config.dt_ms
                if steps == 0:
                    continue
                async with self.lock:
                    for _ in range(steps):
                        self.session.step()
                    self.broadcast_new_events()
        except asyncio.CancelledError:
            pass


def create_app() -> FastAPI:
    app = FastAPI(title="botbrain orchestrator", version="0.1.0")
    sessions: dict[str, ManagedSession] = {}

    def managed(session_id: str) -> ManagedSession:
        if session_id not in sessions:
            raise HTTPException(status_code=404, detail=f"no session {session_id!r}")
        return sessions[session_id]

    @app.post("/sessions", response_model=CreateSessionResponse)
    async def create_session(request: CreateSessionRequest):
        config = OrchestratorConfig.from_dict(request.config or {})
        session_id = request.session_id or uuid.uuid4().hex[:12]
        if session_id in sessions:
            raise HTTPException(status_code=409, detail=f"session {session_id!r} exists")
        try:
            session = Session.from_dicts(
                scenario_dict=request.scenario or default_scenario_dict(),
                config=config,
                seed=request.seed,
                session_id=session_id,
            )
        except (ValueError, TypeError, KeyError) as exc:
            raise HTTPException(status_code=422, detail=f"bad session spec: {exc}") from exc
        entry = ManagedSession(session, request.realtime_factor)
        sessions[session_id] = entry
        if request.realtime_factor > 0:
            entry.pump_task = asyncio.create_task(entry.pump())
        return CreateSessionResponse(id=session_id)

    @app.get("/sessions", response_model=list[SessionSummary])
    async def list_sessions():
        return [
            SessionSummary(
                id=sid,
                t_ms=m.session.world.t_ms,
                adapter_mode=m.session.adapter_mode,
                running=m.pump_task is not None and not m.pump_task.done(),
            )
            for sid, m in sessions.items()
        ]

    @app.post("/sessions/{session_id}/messages", response_model=MessageResponse)
    async def post_message(session_id: str, request: MessageRequest):
        entry = managed(session_id)
        async with entry.lock:
            try:
                events = entry.session.handle_message(request.kind, request.payload)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            entry.broadcast_new_events()
        return MessageResponse(accepted=True, events=events)

    @app.post("/sessions/{session_id}/advance", response_model=AdvanceResponse)
    async def advance(session_id: str, request: AdvanceRequest):
        entry = managed(session_id)
        async with entry.lock:
            start = len(entry.session.event_log)
            entry.session.run_for(request.duration_ms)
            entry.broadcast_new_events()
            events = entry.session.events_since(start)
        return AdvanceResponse(t_ms=entry.session.world.t_ms, events=events)

    @app.get("/sessions/{session_id}/state", response_model=StateResponse)
    async def get_state(session_id: str):
        entry = managed(session_id)
        async with entry.lock:
            return StateResponse(id=session_id, state=entry.session.state_snapshot())

    @app.get("/sessions/{session_id}/tree", response_model=TreesResponse)
    async def get_trees(session_id: str):
        entry = managed(session_id)
        async with entry.lock:
            return TreesResponse(trees=entry.session.trees_xml())

    @app.get("/sessions/{session_id}/events", response_model=EventsResponse)
    async def get_events(session_id: str, since: int = 0):
        entry = managed(session_id)
        async with entry.lock:
            log = entry.session.event_log
            events = [dict(e, seq=i) for i, e in enumerate(log[since:], start=since)]
        return EventsResponse(events=events, next_cursor=len(log))

    @app.delete("/sessions/{session_id}")
    async def delete_session(session_id: str):
        entry = managed(session_id)
        if entry.pump_task:
            entry.pump_task.cancel()
        del sessions[session_id]
        return {"deleted": session_id}

    @app.websocket("/sessions/{session_id}/events")
    async def events_ws(websocket: WebSocket, session_id: str):
        await websocket.accept()
        if session_id not in sessions:
            await websocket.close(code=4404)
            return
        entry = sessions[session_id]
        queue: asyncio.Queue = asyncio.Queue()
        entry.subscribers.append(queue)
        # replay the backlog so late subscribers see history in order
        async with entry.lock:
            backlog = [dict(e, seq=i) for i, e in enumerate(entry.session.event_log[: entry.cursor])]
        try:
            for event in backlog:
                await websocket.send_json(event)
            while True:
                event = await queue.get()
                await websocket.send_json(event)
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            if queue in entry.subscribers:
                entry.subscribers.remove(queue)

    return app


app = create_app()
