"""Deterministic tick execution with memory semantics.

Sequence halts on the first Failure, Fallback on the first Success. A
composite whose child returned Running resumes at that child on the next
tick; children to its left are not re-ticked until the composite resolves.
Timeout is measured in simulated time supplied by the clock callable.
"""

from __future__ import annotations

from typing import Callable, Mapping

from .errors import BtError, HandlerMissingError
from .model import BehaviorTree, BtNode, NodeKind, TickStatus, TickTrace, TraceRecord

Handler = Callable[[dict], "TickStatus | bool"]

_RESOLVED = (TickStatus.SUCCESS, TickStatus.FAILURE)


class Executor:
    """Ticks one tree instance against a blackboard of leaf handlers.

    ``handlers`` maps leaf id to a callable taking the node's params;
    condition handlers may return bool. ``clock`` returns simulated time
    in ms and defaults to a constant 0 (timeouts then never fire).
    """

    def __init__(
        self,
        tree: BehaviorTree,
        handlers: Mapping[str, Handler],
        clock: Callable[[], int] | None = None,
        trace: TickTrace | None = None,
    ):
        self.tree = tree
        self.handlers = handlers
        self.clock = clock or (lambda: 0)
        self.trace = trace if trace is not None else TickTrace()
        # per-instance-path state: composite cursors, chosen branches,
        # timeout episode starts
        self._cursor: dict[tuple, int] = {}
        self._branch: dict[tuple, int] = {}
        self._deadline_start: dict[tuple, int] = {}
        self.last_status: dict[str, TickStatus] = {}

    def reset(self) -> None:
        self._cursor.clear()
        self._branch.clear()
        self._deadline_start.clear()
        self.last_status.clear()

    def tick(self) -> TickStatus:
        root_path = (self.tree.main_tree_id,)
        return self._tick_node(self.tree.main_root, root_path)

    # -- internals ---------------------------------------------------

    @staticmethod
    def _path_str(path: tuple) -> str:
        return "/".join(str(p) for p in path)

    def _record(self, node: BtNode, path: tuple, status: TickStatus) -> None:
        self.last_status[self._path_str(path)] = status
        leaf = node.kind in (NodeKind.ACTION, NodeKind.CONDITION)
        if leaf or status in _RESOLVED:
            self.trace.append(
                TraceRecord(
                    path=self._path_str(path),
                    kind=node.kind.value,
                    node_id=node.id,
                    status=status,
                    t_ms=self.clock(),
                )
            )

    def _clear_below(self, path: tuple) -> None:
        """Drop memory for a node and its whole subtree (halt)."""
        for store in (self._cursor, self._branch, self._deadline_start):
            for key in [k for k in store if k[: len(path)] == path]:
                del store[key]

    def _tick_node(self, node: BtNode, path: tuple) -> TickStatus:
        if node.kind is NodeKind.SEQUENCE:
            status = self._tick_composite(node, path, halt_on=TickStatus.FAILURE)
        elif node.kind is NodeKind.FALLBACK:
            status = self._tick_composite(node, path, halt_on=TickStatus.SUCCESS)
        elif node.kind is NodeKind.IF_THEN_ELSE:
            status = self._tick_if_then_else(node, path)
        elif node.kind is NodeKind.TIMEOUT:
            status = self._tick_timeout(node, path)
        elif node.kind is NodeKind.SUBTREE_REF:
            status = self._tick_node(self.tree.trees[node.id], path + (node.id,))
        else:
            status = self._tick_leaf(node, path)
        self._record(node, path, status)
        return status

    def _tick_composite(self, node: BtNode, path: tuple, halt_on: TickStatus) -> TickStatus:
        done = TickStatus.SUCCESS if halt_on is TickStatus.FAILURE else TickStatus.FAILURE
        start = self._cursor.get(path, 0)
        for i in range(start, len(node.children)):
            status = self._tick_node(node.children[i], path + (i,))
            if status is TickStatus.RUNNING:
                self._cursor[path] = i
                return TickStatus.RUNNING
            if status is halt_on:
                self._clear_below(path)
                return halt_on
        self._clear_below(path)
        return done

    def _tick_if_then_else(self, node: BtNode, path: tuple) -> TickStatus:
        branch = self._branch.get(path)
        if branch is None:
            cond = self._tick_node(node.children[0], path + (0,))
            if cond is TickStatus.RUNNING:
                raise BtError(f"{self._path_str(path)}: condition branch returned Running")
            branch = 1 if cond is TickStatus.SUCCESS else 2
        status = self._tick_node(node.children[branch], path + (branch,))
        if status is TickStatus.RUNNING:
            self._branch[path] = branch
        else:
            self._clear_below(path)
        return status

    def _tick_timeout(self, node: BtNode, path: tuple) -> TickStatus:
        now = self.clock()
        start = self._deadline_start.setdefault(path, now)
        status = self._tick_node(node.children[0], path + (0,))
        if status is not TickStatus.RUNNING:
            self._clear_below(path)
            return status
        if now - start > node.params["ms"]:
            self._clear_below(path)  # halt the child
            return TickStatus.FAILURE
        return TickStatus.RUNNING

    def _tick_leaf(self, node: BtNode, path: tuple) -> TickStatus:
        handler = self.handlers.get(node.id)
        if handler is None:
            raise HandlerMissingError(f"{self._path_str(path)}: no handler for {node.id!r}")
        result = handler(node.params)
        if isinstance(result, bool):
            result = TickStatus.SUCCESS if result else TickStatus.FAILURE
        if not isinstance(result, TickStatus):
            raise BtError(f"{node.id!r} handler returned {result!r}")
        if node.kind is NodeKind.CONDITION and result is TickStatus.RUNNING:
            raise BtError(f"condition {node.id!r} returned Running")
        return result
