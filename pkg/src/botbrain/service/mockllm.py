"""Stand-in for the fine-tuned model server: implements the remote
generation/answering protocol over the template machinery, optionally
degraded by fault injection to emulate an imperfect model."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..bt import serialize_xml
from ..qa import OutcomeContext, answer_template
from ..strategy import (
    SYSTEM_PROMPT,
    CommandError,
    FaultInjectingBackend,
    OracleBackend,
    parse_command_text,
)
from ..bt import default_registry
from .schemas import AnswerRequest, AnswerResponse, GenerateRequest, GenerateResponse


def create_mockllm_app(
    backend_name: str = "oracle",
    drop_prob: float = 0.2,
    swap_prob: float = 0.0,
    seed: int = 0,
) -> FastAPI:
    app = FastAPI(title="botbrain mock model server", version="0.1.0")
    registry = default_registry()
    if backend_name == "faulty":
        backend = FaultInjectingBackend(drop_prob, swap_prob, seed)
    else:
        backend = OracleBackend()

    @app.post("/generate", response_model=GenerateResponse)
    async def generate(request: GenerateRequest):
        text = request.prompt
        if SYSTEM_PROMPT in text:
            text = text.split(SYSTEM_PROMPT, 1)[1]
        try:
            cmd = parse_command_text(text.strip())
        except CommandError as exc:
            raise HTTPException(status_code=422, detail=f"cannot parse command: {exc}") from exc
        tree = backend.generate(cmd, registry)
        return GenerateResponse(xml=serialize_xml(tree))

    @app.post("/answer", response_model=AnswerResponse)
    async def answer(request: AnswerRequest):
        try:
            context = OutcomeContext.from_xml(request.contextXml)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return AnswerResponse(text=answer_template(context, request.question).text)

    return app
