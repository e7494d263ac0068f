"""Question answering over an outcome context.

The template answerer is deliberately rigid keyword matching — a pure
function of (context, question). Anything fuzzier belongs behind the
remote backend.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import httpx

from ..strategy.errors import NetworkError
from .context import OutcomeContext

CANNOT_ANSWER = "I cannot answer that from the execution context."

# verb cues that disambiguate task types sharing a noun
_TASK_CUES = {
    "CollectCake": ("cake", ("collect", "grab", "pick", "got", "get")),
    "DeliverCake": ("cake", ("deliver", "place", "drop", "put")),
    "CollectCherries": ("cherr", ("collect", "gather", "pick", "suck")),
    "DepositCherries": ("cherr", ("deposit", "empty", "unload", "basket")),
    "MoveTo": ("move", ()),
    "ReturnToBase": ("base", ()),
}


@dataclass
class Answer:
    text: str
    supporting_fields: list[str] = field(default_factory=list)


def _mentioned_task_types(question: str) -> list[str]:
    low = question.lower()
    hits = []
    for task_type, (noun, verbs) in _TASK_CUES.items():
        if noun not in low:
            continue
        if verbs and not any(v in low for v in verbs):
            continue
        hits.append(task_type)
    # a bare noun with no matching verb still counts once
    if not hits:
        if "cake" in low:
            hits = ["CollectCake", "DeliverCake"]
        elif "cherr" in low:
            hits = ["CollectCherries", "DepositCherries"]
    return hits


def _describe_status(record) -> str:
    if record.status == "Success":
        return f"Yes - {record.name} ({record.uid}) completed successfully."
    if record.status == "Failure":
        suffix = f" ({record.detail})" if record.detail else ""
        return f"No - {record.name} ({record.uid}) failed{suffix}."
    if record.status == "Running":
        return f"{record.name} ({record.uid}) is still in progress."
    return f"{record.name} ({record.uid}) has not run yet."


def answer_template(context: OutcomeContext, question: str) -> Answer:
    if not question.strip():
        raise ValueError("question must be nonempty")
    low = question.lower()

    mentioned = _mentioned_task_types(question)
    matching = [t for t in context.tasks if t.name in mentioned]
    if matching:
        text = " ".join(_describe_status(t) for t in matching)
        fields = [f"tasks.{t.uid}.status" for t in matching]
        return _checked(Answer(text=text, supporting_fields=fields), context)

    if any(w in low for w in ("fail", "wrong", "problem", "error")):
        failed = [t for t in context.tasks if t.status == "Failure"]
        if not failed:
            return _checked(
                Answer(
                    text="No task has failed so far.",
                    supporting_fields=[f"tasks.{t.uid}.status" for t in context.tasks],
                ),
                context,
            )
        parts = [f"{t.name} ({t.uid}) failed" + (f" - {t.detail}" if t.detail else "") for t in failed]
        return _checked(
            Answer(
                text="; ".join(parts) + ".",
                supporting_fields=[f"tasks.{t.uid}.status" for t in failed],
            ),
            context,
        )

    if any(w in low for w in ("score", "point", "forecast")):
        return _checked(
            Answer(
                text=f"The score forecast is {context.score_forecast} points.",
                supporting_fields=["scoreForecast"],
            ),
            context,
        )

    if any(w in low for w in ("where", "position", "located", "location")):
        r = context.robot
        return _checked(
            Answer(
                text=(
                    f"The robot {r.robot_id} is at ({r.x_mm:.0f}, {r.y_mm:.0f}) mm, "
                    f"heading {r.theta_rad:.2f} rad."
                ),
                supporting_fields=["robot.pose"],
            ),
            context,
        )

    if any(w in low for w in ("hold", "carry", "gripper", "on board")):
        r = context.robot
        stacks = [
            f"gripper {i}: {'+'.join(g.layers)}" + (" with a cherry" if g.cherry_on_top else "")
            for i, g in enumerate(r.grippers)
            if g is not None
        ]
        held = "; ".join(stacks) if stacks else "no cake stacks"
        return _checked(
            Answer(
                text=f"The robot holds {held} and {r.cherries_held} cherries.",
                supporting_fields=["robot.grippers", "robot.cherries_held"],
            ),
            context,
        )

    if any(w in low for w in ("how long", "duration", "time", "elapsed")):
        return _checked(
            Answer(
                text=f"The match has been running for {context.match_time_s:.1f} seconds.",
                supporting_fields=["matchTime_s"],
            ),
            context,
        )

    return Answer(text=CANNOT_ANSWER, supporting_fields=[])


def _checked(answer: Answer, context: OutcomeContext) -> Answer:
    missing = [p for p in answer.supporting_fields if not context.has_path(p)]
    if missing:
        raise AssertionError(f"answer cites fields absent from the context: {missing}")
    return answer


def answer_remote(context: OutcomeContext, question: str, endpoint: str,
                  timeout_s: float = 30.0, transport=None) -> Answer:
    """POST the context and question to an external answering service.

    The reply text is wrapped with empty supporting fields (unverifiable);
    an empty reply is an error, never an empty Answer.
    """
    try:
        with httpx.Client(transport=transport, timeout=timeout_s) as client:
            response = client.post(
                f"{endpoint.rstrip('/')}/answer",
                json={"contextXml": context.to_xml(), "question": question},
            )
        response.raise_for_status()
        text = response.json().get("text", "")
    except (httpx.HTTPError, ValueError) as exc:
        raise NetworkError(f"answer endpoint failed: {exc}") from exc
    if not text.strip():
        raise NetworkError("answer endpoint returned an empty reply")
    return Answer(text=text, supporting_fields=[])
