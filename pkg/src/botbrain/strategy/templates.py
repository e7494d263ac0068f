"""Canonical task-to-subtree expansion.

Every task type maps to one fixed subtree over registry nodes; the main
tree is a Sequence of one SubTree per task, in command order. Expansion
is a pure function of the task alone — the integration metric counts
tasks independently, so a subtree must not change when siblings do.
Gripper params therefore name slot 0; the executing agent remaps to a
free slot at run time.
"""

from __future__ import annotations

from ..bt import BehaviorTree, BtNode, NodeKind
from .command import Command, TaskSpec, TaskType
from .errors import UnknownTaskTypeError

SYSTEM_PROMPT = (
    "You control a pair of omni-wheel field robots. Given an operator "
    "command, produce a behavior tree in the strategy XML format using "
    "only nodes from the registry. Reply with the XML document and "
    "nothing else. [v1]"
)


def _action(node_id: str, **params) -> BtNode:
    return BtNode(NodeKind.ACTION, node_id, params)


def _condition(node_id: str, **params) -> BtNode:
    return BtNode(NodeKind.CONDITION, node_id, params)


def _guarded_move(x: int, y: int) -> list[BtNode]:
    guard = BtNode(
        NodeKind.FALLBACK,
        children=[_condition("PathClear", x_mm=x, y_mm=y), _action("Wait", ms=500)],
    )
    return [guard, _action("MoveTo", x_mm=x, y_mm=y)]


def expand_task(task: TaskSpec, gripper_slot: int = 0) -> BtNode:
    """Subtree root for one task."""
    p = task.params
    if task.task_type is TaskType.COLLECT_CAKE:
        children = _guarded_move(p["x_mm"], p["y_mm"]) + [_action("GrabCake", gripper=gripper_slot)]
    elif task.task_type is TaskType.DELIVER_CAKE:
        children = _guarded_move(p["x_mm"], p["y_mm"]) + [
            _action("ReleaseCake", gripper=gripper_slot)
        ]
    elif task.task_type is TaskType.COLLECT_CHERRIES:
        children = [_action("MoveTo", x_mm=p["x_mm"], y_mm=p["y_mm"]), _action("CollectCherries")]
    elif task.task_type is TaskType.DEPOSIT_CHERRIES:
        children = [
            _action("MoveTo", x_mm=p["x_mm"], y_mm=p["y_mm"]),
            _action("DepositCherries", basket=p["basket"]),
        ]
    elif task.task_type is TaskType.MOVE_TO:
        children = [_action("MoveTo", x_mm=p["x_mm"], y_mm=p["y_mm"])]
    elif task.task_type is TaskType.RETURN_TO_BASE:
        children = [_action("ReturnToBase")]
    else:  # pragma: no cover - enum is closed
        raise UnknownTaskTypeError(str(task.task_type))
    return BtNode(NodeKind.SEQUENCE, children=children)


def task_tree_id(index: int, task: TaskSpec) -> str:
    return f"task{index}_{task.task_type.value}"


def expand_command(cmd: Command, main_tree_id: str = "Main") -> BehaviorTree:
    """Deterministic template expansion of a whole command."""
    trees: dict[str, BtNode] = {}
    refs: list[BtNode] = []
    for i, task in enumerate(cmd.tasks):
        tree_id = task_tree_id(i, task)
        trees[tree_id] = expand_task(task)
        refs.append(BtNode(NodeKind.SUBTREE_REF, id=tree_id))
    trees[main_tree_id] = BtNode(NodeKind.SEQUENCE, children=refs)
    return BehaviorTree(trees=trees, main_tree_id=main_tree_id)
