"""Behavior-tree domain model: nodes, trees, node registry, tick trace."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

ParamValue = int | float | str


class TickStatus(enum.Enum):
    SUCCESS = "Success"
    FAILURE = "Failure"
    RUNNING = "Running"


class NodeKind(enum.Enum):
    SEQUENCE = "Sequence"
    FALLBACK = "Fallback"
    IF_THEN_ELSE = "IfThenElse"
    TIMEOUT = "Timeout"
    ACTION = "Action"
    CONDITION = "Condition"
    SUBTREE_REF = "SubTree"


COMPOSITE_KINDS = frozenset(
    {NodeKind.SEQUENCE, NodeKind.FALLBACK, NodeKind.IF_THEN_ELSE, NodeKind.TIMEOUT}
)
LEAF_KINDS = frozenset({NodeKind.ACTION, NodeKind.CONDITION, NodeKind.SUBTREE_REF})


@dataclass
class BtNode:
    """One tree node.

    ``id`` is the registry identifier for Action/Condition leaves and the
    referenced tree id for SubTree leaves; composites leave it empty.
    """

    kind: NodeKind
    id: str = ""
    params: dict[str, ParamValue] = field(default_factory=dict)
    children: list[BtNode] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return self.kind in LEAF_KINDS

    def iter_nodes(self):
        """Yield this node and every descendant, depth-first."""
        yield self
        for child in self.children:
            yield from child.iter_nodes()


@dataclass
class BehaviorTree:
    """A set of named trees plus the entry point."""

    trees: dict[str, BtNode]
    main_tree_id: str

    @property
    def main_root(self) -> BtNode:
        return self.trees[self.main_tree_id]

    def iter_all_nodes(self):
        for root in self.trees.values():
            yield from root.iter_nodes()


@dataclass(frozen=True)
class ParamSpec:
    name: str
    type: str  # "int" | "float" | "str"
    choices: tuple[ParamValue, ...] | None = None


@dataclass(frozen=True)
class NodeSpec:
    kind: NodeKind  # ACTION or CONDITION
    params: tuple[ParamSpec, ...]
    description: str = ""

    def param(self, name: str) -> ParamSpec | None:
        for p in self.params:
            if p.name == name:
                return p
        return None


class NodeRegistry:
    """Catalog of leaf node ids and their parameter signatures."""

    def __init__(self, entries: dict[str, NodeSpec]):
        self.entries = dict(entries)

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.entries

    def get(self, node_id: str) -> NodeSpec | None:
        return self.entries.get(node_id)

    def to_dict(self) -> dict:
        """JSON-friendly view, used by the remote generation protocol."""
        return {
            node_id: {
                "kind": spec.kind.value,
                "params": [
                    {"name": p.name, "type": p.type}
                    | ({"choices": list(p.choices)} if p.choices else {})
                    for p in spec.params
                ],
                "description": spec.description,
            }
            for node_id, spec in sorted(self.entries.items())
        }


def default_registry() -> NodeRegistry:
    """The node library the simulated robots execute.

    Covers navigation plus every onboard mechanism: three grippers, the
    rotating sorter, the cherry collector and the cherry dispenser.
    """
    gripper = ParamSpec("gripper", "int", choices=(0, 1, 2))
    x_mm = ParamSpec("x_mm", "int")
    y_mm = ParamSpec("y_mm", "int")
    actions = {
        "MoveTo": NodeSpec(NodeKind.ACTION, (x_mm, y_mm), "drive to a field point"),
        "GrabCake": NodeSpec(NodeKind.ACTION, (gripper,), "grip the cake in front into a slot"),
        "ReleaseCake": NodeSpec(NodeKind.ACTION, (gripper,), "set the held stack down in front"),
        "RotateSorter": NodeSpec(
            NodeKind.ACTION, (ParamSpec("deg", "int"),), "rotate the gripper sorter"
        ),
        "CollectCherries": NodeSpec(NodeKind.ACTION, (), "suck up cherries within reach"),
        "DepositCherries": NodeSpec(
            NodeKind.ACTION, (ParamSpec("basket", "str"),), "empty held cherries into a basket"
        ),
        "DispenseCherry": NodeSpec(NodeKind.ACTION, (), "drop one cherry onto an adjacent plated cake"),
        "ReturnToBase": NodeSpec(NodeKind.ACTION, (), "drive back to the team base"),
        "Wait": NodeSpec(NodeKind.ACTION, (ParamSpec("ms", "int"),), "idle for a duration"),
        "ForecastScore": NodeSpec(NodeKind.ACTION, (), "recompute the score forecast"),
    }
    conditions = {
        "IsHolding": NodeSpec(NodeKind.CONDITION, (gripper,), "slot holds a stack"),
        "PathClear": NodeSpec(NodeKind.CONDITION, (x_mm, y_mm), "straight path to point is free"),
        "TimeRemaining": NodeSpec(
            NodeKind.CONDITION, (ParamSpec("ms", "int"),), "at least this much match time left"
        ),
        "OpponentNear": NodeSpec(
            NodeKind.CONDITION, (ParamSpec("dist_mm", "int"),), "an opponent is within range"
        ),
    }
    return NodeRegistry({**actions, **conditions})


@dataclass(frozen=True)
class TraceRecord:
    path: str
    kind: str
    node_id: str
    status: TickStatus
    t_ms: int


class TickTrace:
    """Append-only record of node results with non-decreasing timestamps."""

    def __init__(self):
        self.records: list[TraceRecord] = []

    def append(self, record: TraceRecord) -> None:
        if self.records and record.t_ms < self.records[-1].t_ms:
            raise ValueError(
                f"trace timestamps must not decrease: {record.t_ms} < {self.records[-1].t_ms}"
            )
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def leaf_records(self) -> list[TraceRecord]:
        leaf_kinds = {NodeKind.ACTION.value, NodeKind.CONDITION.value}
        return [r for r in self.records if r.kind in leaf_kinds]

    def to_jsonl(self) -> str:
        """One JSON record per leaf result."""
        import json

        lines = [
            json.dumps(
                {"path": r.path, "id": r.node_id, "status": r.status.value, "t_ms": r.t_ms},
                sort_keys=True,
            )
            for r in self.leaf_records()
        ]
        return "\n".join(lines) + ("\n" if lines else "")
