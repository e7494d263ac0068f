"""Task-integration scoring: which commanded tasks made it into a tree.

A task counts as integrated iff some top-level unit of the candidate tree
carries exactly the leaf multiset of that task's template expansion,
parameters included. Matching ignores unit order and consumes each unit
at most once.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from ..bt import BehaviorTree, BtNode, NodeKind
from .command import Command
from .templates import expand_command


@dataclass(frozen=True)
class IntegrationScore:
    task_hits: int
    fraction: float
    all_integrated: bool


def _leaf_multiset(node: BtNode, tree: BehaviorTree, depth: int = 0) -> Counter:
    if depth > len(tree.trees) + 4:  # cyclic documents score as empty units
        return Counter()
    if node.kind is NodeKind.SUBTREE_REF:
        target = tree.trees.get(node.id)
        return _leaf_multiset(target, tree, depth + 1) if target else Counter()
    if node.kind in (NodeKind.ACTION, NodeKind.CONDITION):
        return Counter([(node.id, tuple(sorted(node.params.items())))])
    total: Counter = Counter()
    for child in node.children:
        total += _leaf_multiset(child, tree, depth)
    return total


def _unit_key(counter: Counter) -> frozenset:
    return frozenset(counter.items())


def candidate_units(tree: BehaviorTree) -> list[frozenset]:
    """Leaf multisets of the tree's top-level units (children of the main
    root, or the root itself when it is a leaf)."""
    root = tree.main_root
    nodes = root.children if root.children else [root]
    return [_unit_key(_leaf_multiset(n, tree)) for n in nodes]


def expected_units(cmd: Command) -> list[frozenset]:
    oracle = expand_command(cmd)
    refs = oracle.main_root.children
    return [_unit_key(_leaf_multiset(ref, oracle)) for ref in refs]


def task_integration_score(tree: BehaviorTree, cmd: Command) -> IntegrationScore:
    expected = Counter(expected_units(cmd))
    got = Counter(candidate_units(tree))
    hits = sum(min(count, got[key]) for key, count in expected.items())
    fraction = hits / len(cmd.tasks)
    return IntegrationScore(task_hits=hits, fraction=fraction, all_integrated=hits == len(cmd.tasks))
