"""The task-integration experiment: commands of one to six tasks, scored
against the generating backend, aggregated both task-pooled and as the
per-command mean. Also ingests externally produced generation logs so a
real model endpoint can be scored identically."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from ..bt import default_registry, parse_xml
from ..bt.errors import BtError
from ..strategy import Command, TaskSpec, random_command, task_integration_score
from ..strategy.errors import StrategyError


@dataclass
class ExperimentSpec:
    backend: object
    task_counts: tuple = (1, 2, 3, 4, 5, 6)
    examples_per_count: int = 10
    seed: int = 0

    @property
    def total_commands(self) -> int:
        return len(self.task_counts) * self.examples_per_count


@dataclass
class CommandOutcome:
    command_id: str
    n_tasks: int
    task_hits: int
    fraction: float
    error: str = ""


@dataclass
class ExperimentResult:
    per_count_accuracy: dict  # task count -> pooled accuracy within the group
    task_level_accuracy: float  # pooled over every task of every command
    mean_per_command_fraction: float
    outcomes: list = field(default_factory=list)

    def fractions_by_count(self) -> dict:
        groups: dict[int, list[float]] = {}
        for outcome in self.outcomes:
            groups.setdefault(outcome.n_tasks, []).append(outcome.fraction)
        return groups


def experiment_commands(spec: ExperimentSpec) -> list[Command]:
    """Deterministic command set: examples_per_count commands per count."""
    rng = random.Random(spec.seed)
    commands = []
    for count in spec.task_counts:
        for _ in range(spec.examples_per_count):
            commands.append(random_command(rng, n_tasks=count))
    return commands


def _aggregate(outcomes: list[CommandOutcome]) -> ExperimentResult:
    total_tasks = sum(o.n_tasks for o in outcomes)
    total_hits = sum(o.task_hits for o in outcomes)
    per_count: dict[int, float] = {}
    for count in sorted({o.n_tasks for o in outcomes}):
        group = [o for o in outcomes if o.n_tasks == count]
        per_count[count] = sum(o.task_hits for o in group) / sum(o.n_tasks for o in group)
    return ExperimentResult(
        per_count_accuracy=per_count,
        task_level_accuracy=total_hits / total_tasks,
        mean_per_command_fraction=sum(o.fraction for o in outcomes) / len(outcomes),
        outcomes=outcomes,
    )


def run_integration_experiment(spec: ExperimentSpec) -> ExperimentResult:
    registry = default_registry()
    outcomes = []
    for i, cmd in enumerate(experiment_commands(spec)):
        try:
            tree = spec.backend.generate(cmd, registry)
            score = task_integration_score(tree, cmd)
            outcomes.append(
                CommandOutcome(
                    command_id=f"cmd{i}",
                    n_tasks=len(cmd.tasks),
                    task_hits=score.task_hits,
                    fraction=score.fraction,
                )
            )
        except (StrategyError, BtError) as exc:
            outcomes.append(
                CommandOutcome(
                    command_id=f"cmd{i}",
                    n_tasks=len(cmd.tasks),
                    task_hits=0,
                    fraction=0.0,
                    error=str(exc),
                )
            )
    return _aggregate(outcomes)


def score_generation_log(records) -> ExperimentResult:
    """Score an external generation log: iterable of
    {commandId, tasks: [{type, params}], xml} records."""
    outcomes = []
    for record in records:
        tasks = tuple(TaskSpec.from_dict(t) for t in record["tasks"])
        cmd = Command(text=record.get("text", f"command {record['commandId']}"), tasks=tasks)
        try:
            tree = parse_xml(record["xml"])
            score = task_integration_score(tree, cmd)
            outcomes.append(
                CommandOutcome(
                    command_id=str(record["commandId"]),
                    n_tasks=len(tasks),
                    task_hits=score.task_hits,
                    fraction=score.fraction,
                )
            )
        except BtError as exc:
            outcomes.append(
                CommandOutcome(
                    command_id=str(record["commandId"]),
                    n_tasks=len(tasks),
                    task_hits=0,
                    fraction=0.0,
                    error=str(exc),
                )
            )
    if not outcomes:
        raise ValueError("generation log is empty")
    return _aggregate(outcomes)


def load_generation_log(path: str | Path) -> list[dict]:
    records = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))
    return records
