"""Tree validation against a node registry: violations as data, never raised.

Guards generated trees before dispatch; a tree with zero violations binds
and ticks without schema-class failures.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    COMPOSITE_KINDS,
    BehaviorTree,
    BtNode,
    NodeKind,
    NodeRegistry,
    ParamValue,
)


@dataclass(frozen=True)
class Violation:
    path: str
    reason: str

    def __str__(self) -> str:
        return f"{self.path}: {self.reason}"


def _value_matches(value: ParamValue, expected_type: str) -> bool:
    if isinstance(value, bool):
        return False
    if expected_type == "int":
        return isinstance(value, int)
    if expected_type == "float":
        return isinstance(value, (int, float))
    return True  # str signatures accept any scalar (attribute text)


def _check_leaf(node: BtNode, registry: NodeRegistry, path: str, out: list[Violation]) -> None:
    spec = registry.get(node.id)
    if spec is None:
        out.append(Violation(path, f"unknown node id {node.id!r}"))
        return
    if spec.kind is not node.kind:
        out.append(Violation(path, f"{node.id!r} is a {spec.kind.value}, used as {node.kind.value}"))
        return
    expected = {p.name: p for p in spec.params}
    for name in node.params:
        if name not in expected:
            out.append(Violation(path, f"{node.id!r} takes no parameter {name!r}"))
    for name, pspec in expected.items():
        if name not in node.params:
            out.append(Violation(path, f"{node.id!r} is missing parameter {name!r}"))
            continue
        value = node.params[name]
        if not _value_matches(value, pspec.type):
            out.append(
                Violation(path, f"parameter {name!r} must be {pspec.type}, got {value!r}")
            )
        elif pspec.choices is not None and value not in pspec.choices:
            out.append(
                Violation(path, f"parameter {name!r} must be one of {pspec.choices}, got {value!r}")
            )


def _check_node(
    node: BtNode, tree: BehaviorTree, registry: NodeRegistry, path: str, out: list[Violation]
) -> None:
    n = len(node.children)
    if node.kind in (NodeKind.SEQUENCE, NodeKind.FALLBACK):
        if n < 1:
            out.append(Violation(path, f"{node.kind.value} needs at least one child"))
    elif node.kind is NodeKind.IF_THEN_ELSE:
        if n != 3:
            out.append(Violation(path, f"IfThenElse needs exactly 3 children, got {n}"))
    elif node.kind is NodeKind.TIMEOUT:
        if n != 1:
            out.append(Violation(path, f"Timeout needs exactly 1 child, got {n}"))
        ms = node.params.get("ms")
        if not isinstance(ms, int) or isinstance(ms, bool) or ms <= 0:
            out.append(Violation(path, "Timeout needs a positive integer ms param"))
    else:
        if n != 0:
            out.append(Violation(path, f"{node.kind.value} must not have children"))
        if node.kind is NodeKind.SUBTREE_REF:
            if node.id not in tree.trees:
                out.append(Violation(path, f"SubTree references unknown tree {node.id!r}"))
        else:
            _check_leaf(node, registry, path, out)
    if node.kind in COMPOSITE_KINDS and node.id:
        out.append(Violation(path, f"{node.kind.value} must not carry an ID"))
    for i, child in enumerate(node.children):
        _check_node(child, tree, registry, f"{path}/{i}", out)


def validate(tree: BehaviorTree, registry: NodeRegistry) -> list[Violation]:
    """Return every invariant violation; empty list means dispatchable."""
    out: list[Violation] = []
    if tree.main_tree_id not in tree.trees:
        out.append(Violation("<document>", f"main tree {tree.main_tree_id!r} not defined"))
    for tree_id, root in tree.trees.items():
        _check_node(root, tree, registry, tree_id, out)

    # reference cycles
    GRAY, BLACK = 1, 2
    color: dict[str, int] = {}

    def visit(tid: str) -> None:
        color[tid] = GRAY
        for node in tree.trees[tid].iter_nodes():
            if node.kind is NodeKind.SUBTREE_REF and node.id in tree.trees:
                if color.get(node.id) == GRAY:
                    out.append(Violation(tid, f"SubTree cycle through {node.id!r}"))
                elif node.id not in color:
                    visit(node.id)
        color[tid] = BLACK

    for tid in tree.trees:
        if tid not in color:
            visit(tid)
    return out
