"""Question-answering corpus: synthesized outcome contexts paired with
questions whose ground-truth answers come from the template answerer, so
corpus and answerer share one truth."""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..bt import NodeKind
from ..qa import GripperView, OutcomeContext, RobotSensors, TaskRecord, answer_template
from ..strategy import expand_task, random_command
from ..strategy.templates import task_tree_id


@dataclass(frozen=True)
class QaSample:
    context: str  # outcome XML
    question: str
    answer: str

    def to_record(self) -> dict:
        return {"instruction": self.question, "input": self.context, "output": self.answer}


_QUESTIONS_BY_INTENT = {
    "score": (
        "What is the score forecast?",
        "How many points do we have so far?",
    ),
    "position": (
        "Where is the robot right now?",
        "What is the robot's current position?",
    ),
    "held": (
        "What is the robot holding?",
        "Which grippers carry a stack?",
    ),
    "duration": (
        "How long has the match been running?",
        "How much time has elapsed?",
    ),
    "failures": (
        "Did anything fail?",
        "Was there any problem during execution?",
    ),
}

_TASK_QUESTIONS = {
    "CollectCake": ("Did the robot collect the cake?", "Did the cake collection succeed?"),
    "DeliverCake": ("Did the robot deliver the cake?", "Was the cake placed as asked?"),
    "CollectCherries": ("Did the robot collect the cherries?", "Did cherry collection work?"),
    "DepositCherries": ("Were the cherries deposited into the basket?", "Did the robot empty the cherries?"),
    "MoveTo": ("Did the robot reach the commanded point?", "Did the move finish?"),
    "ReturnToBase": ("Did the robot return to base?", "Is the robot back home?"),
}


def _failing_leaf(task) -> str:
    subtree = expand_task(task)
    actions = [n.id for n in subtree.iter_nodes() if n.kind is NodeKind.ACTION]
    return actions[-1] if actions else "MoveTo"


def synthesize_context(rng: random.Random) -> OutcomeContext:
    cmd = random_command(rng)
    progress = rng.randint(0, len(cmd.tasks))
    records = []
    for i, task in enumerate(cmd.tasks):
        uid = task_tree_id(i, task)
        if i < progress:
            status, detail = "Success", ""
        elif i == progress and progress < len(cmd.tasks):
            status = rng.choice(["Failure", "Running", "NotRun"])
            detail = f"failed at {_failing_leaf(task)}" if status == "Failure" else ""
        else:
            status, detail = "NotRun", ""
        records.append(
            TaskRecord(uid=uid, name=task.task_type.value, params=dict(task.params),
                       status=status, detail=detail)
        )
    grippers = [
        GripperView(layers=rng.sample(["brown", "yellow", "pink"], rng.randint(1, 3)))
        if rng.random() < 0.4
        else None
        for _ in range(3)
    ]
    sensors = RobotSensors(
        robot_id=rng.choice(["r1", "r2"]),
        x_mm=rng.uniform(200, 2800),
        y_mm=rng.uniform(200, 1800),
        theta_rad=rng.uniform(-3.14, 3.14),
        grippers=grippers,
        cherries_held=rng.randint(0, 12),
    )
    return OutcomeContext(
        match_time_s=rng.randint(0, 1000) / 10.0,
        tasks=records,
        robot=sensors,
        score_forecast=rng.randint(0, 25),
    )


def generate_qa_sample(seed: int, index: int) -> QaSample:
    rng = random.Random(f"qa:{seed}:{index}")
    context = synthesize_context(rng)
    if rng.random() < 0.5:
        record = rng.choice(context.tasks)
        question = rng.choice(_TASK_QUESTIONS[record.name])
    else:
        intent = rng.choice(sorted(_QUESTIONS_BY_INTENT))
        question = rng.choice(_QUESTIONS_BY_INTENT[intent])
    answer = answer_template(context, question)
    return QaSample(context=context.to_xml(), question=question, answer=answer.text)


def generate_qa_corpus(n: int, seed: int = 0) -> list[QaSample]:
    if n < 1:
        raise ValueError("n must be at least 1")
    return [generate_qa_sample(seed, i) for i in range(n)]
