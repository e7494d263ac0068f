"""Operator commands: typed task lists plus their natural-language surface."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

FIELD_WIDTH_MM = 3000
FIELD_HEIGHT_MM = 2000

CAKE_COLORS = ("brown", "yellow", "pink")
BASKETS = ("blue_basket", "green_basket")


class TaskType(enum.Enum):
    COLLECT_CAKE = "CollectCake"
    DELIVER_CAKE = "DeliverCake"
    COLLECT_CHERRIES = "CollectCherries"
    DEPOSIT_CHERRIES = "DepositCherries"
    MOVE_TO = "MoveTo"
    RETURN_TO_BASE = "ReturnToBase"


REQUIRED_PARAMS: dict[TaskType, tuple[str, ...]] = {
    TaskType.COLLECT_CAKE: ("color", "x_mm", "y_mm"),
    TaskType.DELIVER_CAKE: ("x_mm", "y_mm"),
    TaskType.COLLECT_CHERRIES: ("x_mm", "y_mm"),
    TaskType.DEPOSIT_CHERRIES: ("basket", "x_mm", "y_mm"),
    TaskType.MOVE_TO: ("x_mm", "y_mm"),
    TaskType.RETURN_TO_BASE: (),
}


class CommandError(ValueError):
    pass


@dataclass(frozen=True)
class TaskSpec:
    task_type: TaskType
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        required = REQUIRED_PARAMS[self.task_type]
        missing = [p for p in required if p not in self.params]
        if missing:
            raise CommandError(f"{self.task_type.value} is missing params {missing}")
        extra = [p for p in self.params if p not in required]
        if extra:
            raise CommandError(f"{self.task_type.value} takes no params {extra}")
        if "color" in self.params and self.params["color"] not in CAKE_COLORS:
            raise CommandError(f"unknown cake color {self.params['color']!r}")
        for axis, limit in (("x_mm", FIELD_WIDTH_MM), ("y_mm", FIELD_HEIGHT_MM)):
            if axis in self.params and not 0 <= self.params[axis] <= limit:
                raise CommandError(f"{axis}={self.params[axis]} outside field bounds")

    def __hash__(self):
        return hash((self.task_type, tuple(sorted(self.params.items()))))

    def to_dict(self) -> dict:
        return {"type": self.task_type.value, "params": dict(self.params)}

    @classmethod
    def from_dict(cls, data: dict) -> "TaskSpec":
        return cls(TaskType(data["type"]), dict(data.get("params", {})))


@dataclass(frozen=True)
class Command:
    text: str
    tasks: tuple[TaskSpec, ...]
    agent_hint: str | None = None

    def __post_init__(self):
        if not self.text.strip():
            raise CommandError("command text must be nonempty")
        if len(self.tasks) < 1:
            raise CommandError("a command needs at least one task")
        object.__setattr__(self, "tasks", tuple(self.tasks))

    def to_dict(self) -> dict:
        out = {"text": self.text, "tasks": [t.to_dict() for t in self.tasks]}
        if self.agent_hint:
            out["agent"] = self.agent_hint
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Command":
        return cls(
            text=data["text"],
            tasks=tuple(TaskSpec.from_dict(t) for t in data["tasks"]),
            agent_hint=data.get("agent"),
        )


# -- surface-text rendering (shared with the corpus generator) ----------

_PHRASES: dict[TaskType, tuple[str, ...]] = {
    TaskType.COLLECT_CAKE: (
        "collect the {color} cake at ({x_mm}, {y_mm})",
        "pick up the {color} cake near ({x_mm}, {y_mm})",
        "grab the {color} cake located at ({x_mm}, {y_mm})",
    ),
    TaskType.DELIVER_CAKE: (
        "deliver the cake to ({x_mm}, {y_mm})",
        "place the held cake at ({x_mm}, {y_mm})",
        "drop the cake off at ({x_mm}, {y_mm})",
    ),
    TaskType.COLLECT_CHERRIES: (
        "collect the cherries at ({x_mm}, {y_mm})",
        "gather cherries from ({x_mm}, {y_mm})",
    ),
    TaskType.DEPOSIT_CHERRIES: (
        "deposit the cherries into the {basket} at ({x_mm}, {y_mm})",
        "empty your cherries into the {basket} at ({x_mm}, {y_mm})",
    ),
    TaskType.MOVE_TO: (
        "move to ({x_mm}, {y_mm})",
        "drive to point ({x_mm}, {y_mm})",
        "go to ({x_mm}, {y_mm})",
    ),
    TaskType.RETURN_TO_BASE: (
        "return to base",
        "go back to the starting area",
    ),
}

_JOINERS = (", then ", " and then ", "; after that, ", ", next ")


def render_command_text(tasks, rng=None) -> str:
    """Template rendering of a task list; ``rng`` picks phrasing variants."""
    parts = []
    for task in tasks:
        variants = _PHRASES[task.task_type]
        phrase = variants[0] if rng is None else rng.choice(variants)
        parts.append(phrase.format(**task.params))
    if len(parts) == 1:
        text = parts[0]
    else:
        joiner = _JOINERS[0] if rng is None else rng.choice(_JOINERS)
        text = joiner.join(parts)
    return text[0].upper() + text[1:] + "."


def random_task(rng, task_type: TaskType | None = None) -> TaskSpec:
    task_type = task_type or rng.choice(list(TaskType))
    params: dict = {}
    for name in REQUIRED_PARAMS[task_type]:
        if name == "color":
            params[name] = rng.choice(CAKE_COLORS)
        elif name == "basket":
            params[name] = rng.choice(BASKETS)
        elif name == "x_mm":
            params[name] = rng.randrange(200, FIELD_WIDTH_MM - 199, 50)
        elif name == "y_mm":
            params[name] = rng.randrange(200, FIELD_HEIGHT_MM - 199, 50)
    return TaskSpec(task_type, params)


def random_command(rng, n_tasks: int | None = None) -> Command:
    n = n_tasks if n_tasks is not None else rng.randint(1, 6)
    tasks = tuple(random_task(rng) for _ in range(n))
    return Command(text=render_command_text(tasks, rng), tasks=tasks)


# -- rigid keyword grammar for console convenience -----------------------

_COORDS = re.compile(r"(?:at|to|from|near)\D*?(\d+)\D+?(\d+)")
_COLOR = re.compile(r"\b(brown|yellow|pink)\b")
_BASKET = re.compile(r"\b(\w*basket\w*)\b")


def _clause_task(clause: str, resolver) -> TaskSpec:
    low = clause.lower()
    coords = _COORDS.search(low)
    xy = {"x_mm": int(coords.group(1)), "y_mm": int(coords.group(2))} if coords else {}

    def need_xy(task_type, extra=None):
        params = dict(xy)
        if extra:
            params.update(extra)
        if "x_mm" not in params:
            if resolver is None:
                raise CommandError(f"no coordinates in {clause!r} and no resolver")
            params.update(resolver(task_type, params))
        return TaskSpec(task_type, params)

    if any(w in low for w in ("base", "home", "starting area", "start zone")):
        return TaskSpec(TaskType.RETURN_TO_BASE)
    if "cherr" in low:
        if any(w in low for w in ("deposit", "empty", "unload", "basket")):
            basket = _BASKET.search(low)
            extra = {"basket": basket.group(1) if basket else BASKETS[0]}
            return need_xy(TaskType.DEPOSIT_CHERRIES, extra)
        return need_xy(TaskType.COLLECT_CHERRIES)
    if "cake" in low:
        if any(w in low for w in ("deliver", "place", "drop", "put")):
            return need_xy(TaskType.DELIVER_CAKE)
        color = _COLOR.search(low)
        if color is None:
            raise CommandError(f"cannot tell the cake color in {clause!r}")
        return need_xy(TaskType.COLLECT_CAKE, {"color": color.group(1)})
    if any(w in low for w in ("move", "go", "drive")):
        return need_xy(TaskType.MOVE_TO)
    raise CommandError(f"cannot understand clause {clause!r}")


_CLAUSE_SPLIT = re.compile(r";|\band then\b|\bthen\b|\bnext\b|\bafter that\b|\band\b")


def parse_command_text(text: str, resolver=None) -> Command:
    """Rigid keyword grammar turning console text into typed tasks.

    Clauses split on connectives only (never on bare commas, which appear
    inside coordinate pairs). ``resolver(task_type, partial_params) ->
    dict`` may fill positions the text leaves out (e.g. looked up from
    the live world).
    """
    clauses = [c for c in _CLAUSE_SPLIT.split(text) if c.strip(" ,.")]
    if not clauses:
        raise CommandError("empty command")
    tasks = tuple(_clause_task(c, resolver) for c in clauses)
    return Command(text=text, tasks=tasks)
