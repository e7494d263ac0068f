"""Execution-outcome context: assembled from the tree, its trace and the
robot sensors, serialized as a deterministic XML document for answering."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from ..bt import BehaviorTree, NodeKind, TickTrace
from ..world.model import RobotState, WorldState
from ..world.score import forecast_score

TASK_STATUSES = ("Success", "Failure", "NotRun", "Running")


class ContextError(ValueError):
    pass


@dataclass
class TaskRecord:
    uid: str  # subtree id, e.g. "task0_CollectCake"
    name: str  # task type, e.g. "CollectCake"
    params: dict
    status: str
    detail: str = ""

    def __post_init__(self):
        if self.status not in TASK_STATUSES:
            raise ContextError(f"bad task status {self.status!r}")


@dataclass
class GripperView:
    layers: list[str] = field(default_factory=list)
    cherry_on_top: bool = False


@dataclass
class RobotSensors:
    robot_id: str
    x_mm: float
    y_mm: float
    theta_rad: float
    grippers: list[GripperView | None]
    cherries_held: int


@dataclass
class OutcomeContext:
    match_time_s: float
    tasks: list[TaskRecord]
    robot: RobotSensors
    score_forecast: int

    # -- path lookups used by Answer.supporting_fields -----------------

    def has_path(self, path: str) -> bool:
        if path in ("scoreForecast", "matchTime_s", "robot.pose", "robot.grippers",
                    "robot.cherries_held"):
            return True
        if path.startswith("tasks."):
            parts = path.split(".")
            if len(parts) == 3 and parts[2] in ("status", "detail", "name"):
                return any(t.uid == parts[1] for t in self.tasks)
        return False

    def to_xml(self) -> str:
        root = ET.Element(
            "outcome",
            {
                "match_time_s": repr(float(self.match_time_s)),
                "score_forecast": str(self.score_forecast),
            },
        )
        tasks = ET.SubElement(root, "tasks")
        for record in self.tasks:
            task = ET.SubElement(
                tasks, "task", {"uid": record.uid, "name": record.name, "status": record.status}
            )
            if record.detail:
                task.set("detail", record.detail)
            for name in sorted(record.params):
                ET.SubElement(task, "param", {"name": name, "value": str(record.params[name])})
        robot = ET.SubElement(
            root,
            "robot",
            {
                "id": self.robot.robot_id,
                "x_mm": repr(float(self.robot.x_mm)),
                "y_mm": repr(float(self.robot.y_mm)),
                "theta_rad": repr(float(self.robot.theta_rad)),
                "cherries_held": str(self.robot.cherries_held),
            },
        )
        for i, gripper in enumerate(self.robot.grippers):
            elem = ET.SubElement(robot, "gripper", {"index": str(i)})
            if gripper is not None:
                elem.set("layers", ",".join(gripper.layers))
                elem.set("cherry", "true" if gripper.cherry_on_top else "false")
        ET.indent(root, space="  ")
        return ET.tostring(root, encoding="unicode") + "\n"

    @classmethod
    def from_xml(cls, text: str) -> "OutcomeContext":
        try:
            root = ET.fromstring(text)
        except ET.ParseError as exc:
            raise ContextError(f"malformed context XML: {exc}") from exc
        if root.tag != "outcome":
            raise ContextError(f"document element must be <outcome>, got <{root.tag}>")
        tasks_elem = root.find("tasks")
        robot_elem = root.find("robot")
        if tasks_elem is None or robot_elem is None:
            raise ContextError("context needs <tasks> and <robot> sections")
        tasks = []
        for task in tasks_elem:
            if task.tag != "task":
                raise ContextError(f"unexpected <{task.tag}> under <tasks>")
            params = {}
            for param in task:
                raw = param.attrib["value"]
                try:
                    value = int(raw)
                except ValueError:
                    try:
                        value = float(raw)
                    except ValueError:
                        value = raw
                params[param.attrib["name"]] = value
            tasks.append(
                TaskRecord(
                    uid=task.attrib["uid"],
                    name=task.attrib["name"],
                    params=params,
                    status=task.attrib["status"],
                    detail=task.attrib.get("detail", ""),
                )
            )
        grippers: list[GripperView | None] = []
        for elem in robot_elem:
            if "layers" in elem.attrib:
                grippers.append(
                    GripperView(
                        layers=[s for s in elem.attrib["layers"].split(",") if s],
                        cherry_on_top=elem.attrib.get("cherry") == "true",
                    )
                )
            else:
                grippers.append(None)
        robot = RobotSensors(
            robot_id=robot_elem.attrib["id"],
            x_mm=float(robot_elem.attrib["x_mm"]),
            y_mm=float(robot_elem.attrib["y_mm"]),
            theta_rad=float(robot_elem.attrib["theta_rad"]),
            grippers=grippers,
            cherries_held=int(robot_elem.attrib["cherries_held"]),
        )
        return cls(
            match_time_s=float(root.attrib["match_time_s"]),
            tasks=tasks,
            robot=robot,
            score_forecast=int(root.attrib["score_forecast"]),
        )


def validate_context_xml(text: str) -> list[str]:
    """Schema check as data: empty list when the document conforms."""
    try:
        OutcomeContext.from_xml(text)
        return []
    except (ContextError, KeyError, ValueError) as exc:
        return [str(exc)]


def _task_name(uid: str) -> str:
    if uid.startswith("task") and "_" in uid:
        return uid.split("_", 1)[1]
    return uid


def _merged_leaf_params(root, tree: BehaviorTree) -> dict:
    params: dict = {}
    stack = [root]
    seen_trees = set()
    while stack:
        node = stack.pop(0)
        if node.kind is NodeKind.SUBTREE_REF:
            if node.id in tree.trees and node.id not in seen_trees:
                seen_trees.add(node.id)
                stack.append(tree.trees[node.id])
            continue
        if node.kind in (NodeKind.ACTION, NodeKind.CONDITION):
            for name, value in node.params.items():
                params.setdefault(name, value)
        stack.extend(node.children)
    return params


def assemble_context(
    tree: BehaviorTree, trace: TickTrace, robot: RobotState, world: WorldState
) -> OutcomeContext:
    """One task record per top-level unit of the main tree, with status
    derived from the trace: the unit's own resolution when recorded,
    Running when only descendants appear, NotRun otherwise."""
    main_id = tree.main_tree_id
    records = []
    for i, child in enumerate(tree.main_root.children):
        unit_path = f"{main_id}/{i}"
        uid = child.id if child.kind is NodeKind.SUBTREE_REF else f"unit{i}_{child.kind.value}"
        status = "NotRun"
        detail = ""
        for record in trace:
            if record.path == unit_path and record.status.value in ("Success", "Failure"):
                status = record.status.value
            elif record.path.startswith(unit_path + "/") and status == "NotRun":
                status = "Running"
            if (
                record.path.startswith(unit_path)
                and record.status.value == "Failure"
                and record.kind in ("Action", "Condition")
                and not detail
            ):
                detail = f"failed at {record.node_id}"
        if status != "Failure":
            detail = ""
        records.append(
            TaskRecord(
                uid=uid,
                name=_task_name(uid),
                params=_merged_leaf_params(child, tree),
                status=status,
                detail=detail,
            )
        )
    sensors = RobotSensors(
        robot_id=robot.id,
        x_mm=robot.x_mm,
        y_mm=robot.y_mm,
        theta_rad=robot.theta_rad,
        grippers=[
            None if g is None else GripperView(layers=list(g.layers), cherry_on_top=g.cherry_on_top)
            for g in robot.grippers
        ],
        cherries_held=robot.cherries_held,
    )
    return OutcomeContext(
        match_time_s=world.t_ms / 1000.0,
        tasks=records,
        robot=sensors,
        score_forecast=forecast_score(world),
    )
