"""Generator backends: template oracle, seeded fault injection, remote model."""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import replace

import httpx

from ..bt import BehaviorTree, NodeRegistry, parse_xml, validate
from ..bt.errors import BtError
from .command import (
    BASKETS,
    CAKE_COLORS,
    FIELD_HEIGHT_MM,
    FIELD_WIDTH_MM,
    Command,
    TaskSpec,
)
from .errors import GenerationRejected, NetworkError
from .templates import SYSTEM_PROMPT, expand_command


class OracleBackend:
    """Deterministic template expansion; its output always validates."""

    name = "oracle"

    def generate(self, cmd: Command, registry: NodeRegistry) -> BehaviorTree:
        return expand_command(cmd)


def _command_digest(cmd: Command) -> int:
    payload = json.dumps(cmd.to_dict(), sort_keys=True).encode()
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "big")


def _swap_value(rng: random.Random, name: str, value):
    if name == "color":
        return rng.choice([c for c in CAKE_COLORS if c != value])
    if name == "basket":
        return rng.choice([b for b in BASKETS if b != value]) if len(BASKETS) > 1 else value + "_x"
    limit = FIELD_WIDTH_MM if name == "x_mm" else FIELD_HEIGHT_MM
    while True:
        candidate = rng.randrange(200, limit - 199, 50)
        if candidate != value:
            return candidate


class FaultInjectingBackend:
    """Oracle output degraded like an imperfect generator: each task is
    dropped with ``drop_prob`` and each task parameter replaced with a
    wrong in-domain value with ``swap_prob``. Reproducible per seed."""

    name = "faulty"

    def __init__(self, drop_prob: float, swap_prob: float, seed: int):
        if not 0 <= drop_prob <= 1 or not 0 <= swap_prob <= 1:
            raise ValueError("probabilities must be within [0, 1]")
        self.drop_prob = drop_prob
        self.swap_prob = swap_prob
        self.seed = seed

    def generate(self, cmd: Command, registry: NodeRegistry) -> BehaviorTree:
        rng = random.Random(self.seed * (1 << 64) + _command_digest(cmd))
        kept: list[TaskSpec] = []
        for task in cmd.tasks:
            if rng.random() < self.drop_prob:
                continue
            params = dict(task.params)
            for name in sorted(params):
                if rng.random() < self.swap_prob:
                    params[name] = _swap_value(rng, name, params[name])
            kept.append(replace(task, params=params))
        if not kept:
            # keep the document a valid tree: a no-op main with zero task subtrees
            from ..bt import BtNode, NodeKind

            noop = BtNode(NodeKind.SEQUENCE, children=[BtNode(NodeKind.ACTION, "Wait", {"ms": 1})])
            return BehaviorTree(trees={"Main": noop}, main_tree_id="Main")
        degraded = Command(text=cmd.text, tasks=tuple(kept), agent_hint=cmd.agent_hint)
        return expand_command(degraded)


class RemoteBackend:
    """HTTP client for an externally hosted generator.

    POSTs ``{prompt, registry}`` to ``<endpoint>/generate`` and expects
    ``{"xml": "..."}`` back. The reply is parsed and validated; anything
    that does not survive is rejected and never dispatched. A custom
    ``transport`` (e.g. httpx.ASGITransport) may replace the network.
    """

    name = "remote"

    def __init__(self, endpoint: str, timeout_s: float = 30.0, transport=None):
        self.endpoint = endpoint.rstrip("/")
        self.timeout_s = timeout_s
        self.transport = transport

    def generate(self, cmd: Command, registry: NodeRegistry) -> BehaviorTree:
        body = {"prompt": SYSTEM_PROMPT + "\n\n" + cmd.text, "registry": registry.to_dict()}
        try:
            with httpx.Client(transport=self.transport, timeout=self.timeout_s) as client:
                response = client.post(f"{self.endpoint}/generate", json=body)
            response.raise_for_status()
            xml_text = response.json()["xml"]
        except (httpx.HTTPError, KeyError, ValueError) as exc:
            raise NetworkError(f"generator endpoint failed: {exc}") from exc

        try:
            tree = parse_xml(xml_text)
        except BtError as exc:
            raise GenerationRejected(f"unparseable tree: {exc}", [str(exc)]) from exc
        violations = validate(tree, registry)
        if violations:
            raise GenerationRejected(
                f"generated tree has {len(violations)} violation(s)", violations
            )
        return tree


def make_backend(name: str, **kwargs):
    if name == "oracle":
        return OracleBackend()
    if name == "faulty":
        return FaultInjectingBackend(
            drop_prob=kwargs.get("drop_prob", 0.2),
            swap_prob=kwargs.get("swap_prob", 0.0),
            seed=kwargs.get("seed", 0),
        )
    if name == "remote":
        return RemoteBackend(endpoint=kwargs["endpoint"], timeout_s=kwargs.get("timeout_s", 30.0))
    raise ValueError(f"unknown backend {name!r}")
