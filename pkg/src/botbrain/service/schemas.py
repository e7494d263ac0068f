"""Request/response models for the orchestrator service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class CreateSessionRequest(BaseModel):
    scenario: dict | None = None  # inline scenario JSON; default field when omitted
    config: dict | None = None  # OrchestratorConfig overrides
    seed: int = 0
    session_id: str | None = None
    realtime_factor: float = Field(default=0.0, ge=0.0)  # 0 = no background pump


class CreateSessionResponse(BaseModel):
    id: str


class SessionSummary(BaseModel):
    id: str
    t_ms: int
    adapter_mode: str
    running: bool


class MessageRequest(BaseModel):
    kind: Literal["command", "question"]
    payload: dict


class MessageResponse(BaseModel):
    accepted: bool
    events: list[dict]


class AdvanceRequest(BaseModel):
    duration_ms: int = Field(gt=0, le=600_000)


class AdvanceResponse(BaseModel):
    t_ms: int
    events: list[dict]


class StateResponse(BaseModel):
    id: str
    state: dict


class TreesResponse(BaseModel):
    trees: dict[str, str | None]


class EventsResponse(BaseModel):
    events: list[dict]
    next_cursor: int


class GenerateRequest(BaseModel):
    prompt: str
    registry: dict = Field(default_factory=dict)


class GenerateResponse(BaseModel):
    xml: str


class AnswerRequest(BaseModel):
    contextXml: str
    question: str


class AnswerResponse(BaseModel):
    text: str
