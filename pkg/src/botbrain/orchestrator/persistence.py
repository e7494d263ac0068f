"""Append-only JSONL event logs and replay-based restore.

Restore re-executes the session from the init event, re-injecting the
logged messages at their simulated times; generator and answerer outputs
are replayed from the log so remote backends reproduce exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..bt import parse_xml
from ..qa import Answer
from ..strategy import GenerationRejected
from .config import OrchestratorConfig
from .session import Session


class CorruptLogError(Exception):
    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def canonical_line(event: dict) -> str:
    return json.dumps(event, sort_keys=True, separators=(",", ":"))


def persist(session: Session, log_dir: str | Path) -> Path:
    log_dir = Path(log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)
    path = log_dir / f"{session.id}.jsonl"
    with path.open("w", encoding="utf-8") as fh:
        for event in session.event_log:
            fh.write(canonical_line(event) + "\n")
    return path


def read_log(path: str | Path) -> list[dict]:
    raw = Path(path).read_text(encoding="utf-8")
    if raw and not raw.endswith("\n"):
        raise CorruptLogError("truncated final line (no newline)", raw.count("\n") + 1)
    events = []
    for number, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            events.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise CorruptLogError(f"invalid JSON ({exc.msg})", number) from exc
    return events


class ReplayBackend:
    """Feeds logged generation outcomes back in order.

    Command-stage rejects are re-derived from the payload by the session
    itself, so the queue holds only events produced at or after the
    generation call: dispatches, generation rejects, and validation
    rejects (those carry the offending xml so the session re-validates).
    """

    def __init__(self, events: list[dict]):
        self.queue = [
            e
            for e in events
            if e["type"] == "dispatch"
            or (e["type"] == "reject" and e.get("stage") in ("generate", "validate"))
        ]

    def generate(self, cmd, registry):
        if not self.queue:
            raise GenerationRejected("replay log exhausted", [])
        event = self.queue.pop(0)
        if event["type"] == "reject" and event["stage"] == "generate":
            raise GenerationRejected(event["reason"], event.get("violations", []))
        return parse_xml(event["xml"])


class ReplayAnswerer:
    def __init__(self, events: list[dict]):
        self.queue = [e for e in events if e["type"] == "answer"]

    def answer(self, context, question) -> Answer:
        if not self.queue:
            raise RuntimeError("replay log has no further answers")
        event = self.queue.pop(0)
        return Answer(text=event["text"], supporting_fields=list(event["supportingFields"]))


def replay(events: list[dict]) -> Session:
    """Re-execute a logged session to its final state."""
    if not events or events[0]["type"] != "init":
        raise CorruptLogError("log does not start with an init event", 1)
    init = events[0]
    session = Session.from_dicts(
        scenario_dict=init["scenario"],
        config=OrchestratorConfig.from_dict(init["config"]),
        seed=init["seed"],
        session_id=init["sessionId"],
        backend=ReplayBackend(events),
        answerer=ReplayAnswerer(events),
    )
    messages = [e for e in events if e["type"] == "message"]
    for message in messages:
        session.run_until(message["t_ms"])
        session.handle_message(message["kind"], message["payload"])
    session.run_until(events[-1]["t_ms"])
    return session


def restore(session_id: str, log_dir: str | Path) -> Session:
    return replay(read_log(Path(log_dir) / f"{session_id}.jsonl"))
