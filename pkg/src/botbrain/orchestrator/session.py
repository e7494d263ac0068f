"""The single brain: owns one world, routes operator messages through the
exclusive adapter mode (paying the switch delay in simulated time), runs
the 40 Hz control loop with 10 Hz tree ticks, and records every event."""

from __future__ import annotations

import math
import uuid
from dataclasses import dataclass, field

from ..bt import BehaviorTree, default_registry, serialize_xml, validate
from ..qa import Answer, OutcomeContext, RobotSensors, GripperView, answer_remote, answer_template, assemble_context
from ..strategy import (
    Command,
    CommandError,
    GenerationRejected,
    TaskType,
    make_backend,
    parse_command_text,
)
from ..world import Scenario, forecast_score, scenario_from_dict, step
from .agent import AgentRuntime
from .config import OrchestratorConfig

MODE_BT_GEN = "btGen"
MODE_QA = "qa"


@dataclass
class SessionStats:
    mode_transitions: int = 0
    switch_ms_accrued: int = 0
    messages: int = 0
    dispatches: int = 0
    rejections: int = 0
    answers: int = 0


class Session:
    def __init__(
        self,
        scenario: Scenario,
        config: OrchestratorConfig,
        seed: int = 0,
        session_id: str | None = None,
        backend=None,
        answerer=None,
        scenario_dict: dict | None = None,
    ):
        self.id = session_id or uuid.uuid4().hex[:12]
        self.config = config
        self.seed = seed
        self.scenario = scenario
        self.scenario_dict = scenario_dict
        self.world = scenario.world
        self.world.rng_seed = seed
        self.registry = default_registry()
        self.backend = backend if backend is not None else self._backend_from_config()
        self.answerer = answerer
        self.agents = {
            robot.id: AgentRuntime(self, robot.id) for robot in self.world.own_robots()
        }
        self.adapter_mode = MODE_BT_GEN
        self.mode_switch_remaining_ms = 0
        self.pending: list[dict] = []
        self.event_log: list[dict] = []
        self.step_index = 0
        self.stats = SessionStats()
        self._opp_targets = {s.robot_id: 0 for s in scenario.opponent_scripts}

    # -- construction ----------------------------------------------------

    @classmethod
    def from_dicts(
        cls,
        scenario_dict: dict,
        config: OrchestratorConfig | None = None,
        seed: int = 0,
        session_id: str | None = None,
        backend=None,
        answerer=None,
    ) -> "Session":
        config = config or OrchestratorConfig()
        scenario = scenario_from_dict(scenario_dict, seed=seed)
        session = cls(
            scenario,
            config,
            seed=seed,
            session_id=session_id,
            backend=backend,
            answerer=answerer,
            scenario_dict=scenario_dict,
        )
        session._emit(
            {
                "type": "init",
                "t_ms": 0,
                "scenario": scenario_dict,
                "config": config.to_dict(),
                "seed": seed,
                "sessionId": session.id,
            }
        )
        return session

    def _backend_from_config(self):
        b = self.config.backend
        if b.name == "faulty":
            return make_backend("faulty", drop_prob=b.drop_prob, swap_prob=b.swap_prob, seed=b.seed)
        if b.name == "remote":
            return make_backend("remote", endpoint=b.endpoint)
        return make_backend("oracle")

    # -- events -----------------------------------------------------------

    def _emit(self, event: dict) -> dict:
        self.event_log.append(event)
        return event

    def events_since(self, index: int) -> list[dict]:
        return self.event_log[index:]

    # -- operator messages --------------------------------------------------

    def handle_message(self, kind: str, payload: dict) -> list[dict]:
        """Route one operator message; returns the events it produced so
        far (more may follow once a mode switch completes)."""
        if kind not in ("command", "question"):
            raise ValueError(f"unknown message kind {kind!r}")
        start = len(self.event_log)
        self._emit({"type": "message", "t_ms": self.world.t_ms, "kind": kind, "payload": payload})
        self.stats.messages += 1
        self.pending.append({"kind": kind, "payload": payload})
        self._drain_pending()
        return self.events_since(start)

    def _drain_pending(self) -> None:
        while self.pending and self.mode_switch_remaining_ms == 0:
            kind = self.pending[0]["kind"]
            target = MODE_BT_GEN if kind == "command" else MODE_QA
            if self.adapter_mode != target:
                self._emit(
                    {
                        "type": "modeSwitch",
                        "t_ms": self.world.t_ms,
                        "from": self.adapter_mode,
                        "to": target,
                        "delay_ms": self.config.adapter_switch_ms,
                    }
                )
                self.adapter_mode = target
                self.mode_switch_remaining_ms = self.config.adapter_switch_ms
                self.stats.mode_transitions += 1
                self.stats.switch_ms_accrued += self.config.adapter_switch_ms
                if self.mode_switch_remaining_ms > 0:
                    return
            message = self.pending.pop(0)
            if message["kind"] == "command":
                self._process_command(message["payload"])
            else:
                self._process_question(message["payload"])

    def _pick_agent(self, payload: dict, hint: str | None = None) -> AgentRuntime:
        agent_id = payload.get("agent") or hint
        if agent_id:
            if agent_id not in self.agents:
                raise ValueError(f"unknown agent {agent_id!r}")
            return self.agents[agent_id]
        return next(iter(self.agents.values()))

    def _command_from_payload(self, payload: dict) -> Command:
        if payload.get("tasks"):
            return Command.from_dict(payload)
        return parse_command_text(payload["text"], resolver=self._world_resolver)

    def _world_resolver(self, task_type: TaskType, params: dict) -> dict:
        """Fill missing coordinates from the live field."""
        world = self.world
        if task_type is TaskType.COLLECT_CAKE:
            color = params.get("color")
            cakes = [c for c in world.cakes if c.on_plate is None and color in c.layers]
            if not cakes:
                raise CommandError(f"no {color} cake on the field")
            cake = cakes[0]
            return {"x_mm": int(cake.x_mm), "y_mm": int(cake.y_mm)}
        if task_type is TaskType.COLLECT_CHERRIES:
            if not world.cherries:
                raise CommandError("no cherries left on the field")
            x, y = world.cherries[0]
            return {"x_mm": int(x), "y_mm": int(max(min(y, world.config.height_mm - 200), 200))}
        if task_type is TaskType.DEPOSIT_CHERRIES:
            basket = next((b for b in world.baskets if b.id == params.get("basket")), None)
            basket = basket or next(b for b in world.baskets if b.team == world.own_team)
            return {"basket": basket.id, "x_mm": int(basket.x_mm) + 250, "y_mm": int(basket.y_mm)}
        if task_type is TaskType.DELIVER_CAKE:
            plate = next(p for p in self.world.plates if p.team == world.own_team)
            return {"x_mm": int(plate.x_mm), "y_mm": int(plate.y_mm)}
        raise CommandError(f"cannot resolve coordinates for {task_type.value}")

    def _process_command(self, payload: dict) -> None:
        agent = self._pick_agent(payload)
        try:
            cmd = self._command_from_payload(payload)
        except (CommandError, KeyError) as exc:
            self.stats.rejections += 1
            self._emit(
                {
                    "type": "reject",
                    "stage": "command",
                    "t_ms": self.world.t_ms,
                    "agent": agent.robot_id,
                    "reason": f"bad command: {exc}",
                    "violations": [],
                }
            )
            return
        if cmd.agent_hint and cmd.agent_hint in self.agents:
            agent = self.agents[cmd.agent_hint]
        try:
            tree = self.backend.generate(cmd, self.registry)
        except GenerationRejected as exc:
            self.stats.rejections += 1
            self._emit(
                {
                    "type": "reject",
                    "stage": "generate",
                    "t_ms": self.world.t_ms,
                    "agent": agent.robot_id,
                    "reason": str(exc),
                    "violations": [str(v) for v in exc.violations],
                }
            )
            return
        violations = validate(tree, self.registry)
        if violations:
            self.stats.rejections += 1
            self._emit(
                {
                    "type": "reject",
                    "stage": "validate",
                    "t_ms": self.world.t_ms,
                    "agent": agent.robot_id,
                    "reason": "generated tree failed validation",
                    "violations": [str(v) for v in violations],
                    "xml": serialize_xml(tree),
                }
            )
            return
        agent.dispatch(tree)
        self.stats.dispatches += 1
        self._emit(
            {
                "type": "dispatch",
                "t_ms": self.world.t_ms,
                "agent": agent.robot_id,
                "xml": serialize_xml(tree),
            }
        )

    def _context_for(self, agent: AgentRuntime) -> OutcomeContext:
        robot = self.world.robot(agent.robot_id)
        if agent.tree is not None:
            return assemble_context(agent.tree, agent.trace, robot, self.world)
        sensors = RobotSensors(
            robot_id=robot.id,
            x_mm=robot.x_mm,
            y_mm=robot.y_mm,
            theta_rad=robot.theta_rad,
            grippers=[
                None if g is None else GripperView(list(g.layers), g.cherry_on_top)
                for g in robot.grippers
            ],
            cherries_held=robot.cherries_held,
        )
        return OutcomeContext(
            match_time_s=self.world.t_ms / 1000.0,
            tasks=[],
            robot=sensors,
            score_forecast=forecast_score(self.world),
        )

    def _process_question(self, payload: dict) -> None:
        agent = self._pick_agent(payload)
        context = self._context_for(agent)
        question = payload["text"]
        if self.answerer is not None:
            answer = self.answerer.answer(context, question)
        elif self.config.answerer.name == "remote":
            answer = answer_remote(context, question, self.config.answerer.endpoint)
        else:
            answer = answer_template(context, question)
        self.stats.answers += 1
        self._emit(
            {
                "type": "answer",
                "t_ms": self.world.t_ms,
                "agent": agent.robot_id,
                "text": answer.text,
                "supportingFields": list(answer.supporting_fields),
            }
        )

    # -- simulation loop ----------------------------------------------------

    def _opponent_controls(self) -> dict:
        controls = {}
        for script in self.scenario.opponent_scripts:
            if not script.waypoints:
                continue
            robot = self.world.robot(script.robot_id)
            idx = self._opp_targets[script.robot_id]
            tx, ty = script.waypoints[idx]
            dx, dy = tx - robot.x_mm, ty - robot.y_mm
            dist = math.hypot(dx, dy)
            if dist < 30.0:
                idx = (idx + 1) % len(script.waypoints)
                self._opp_targets[script.robot_id] = idx
                tx, ty = script.waypoints[idx]
                dx, dy = tx - robot.x_mm, ty - robot.y_mm
                dist = math.hypot(dx, dy)
            if dist > 1e-9:
                controls[script.robot_id] = (
                    script.speed_mm_s * dx / dist,
                    script.speed_mm_s * dy / dist,
                    0.0,
                )
        return controls

    def step(self) -> list[dict]:
        """One 25 ms tick: countdowns, sense/localize, track, physics, then
        tree ticks at 10 Hz and status reports at 2 Hz."""
        start = len(self.event_log)
        cfg = self.config
        if self.mode_switch_remaining_ms > 0:
            self.mode_switch_remaining_ms = max(0, self.mode_switch_remaining_ms - cfg.dt_ms)

        controls = self._opponent_controls()
        for agent in self.agents.values():
            agent.localize_step(self.step_index)
            controls[agent.robot_id] = agent.motion_step(self.step_index)

        step(self.world, controls, cfg.dt_ms)
        self.step_index += 1

        if self.step_index % cfg.bt_tick_every_steps == 0:
            for agent in self.agents.values():
                before = len(agent.trace)
                status = agent.tick_tree()
                for record in agent.trace.records[before:]:
                    self._emit(
                        {
                            "type": "leaf",
                            "t_ms": record.t_ms,
                            "agent": agent.robot_id,
                            "path": record.path,
                            "id": record.node_id,
                            "kind": record.kind,
                            "status": record.status.value,
                        }
                    )
                if status is not None and status.value in ("Success", "Failure"):
                    self._emit(
                        {
                            "type": "treeResolved",
                            "t_ms": self.world.t_ms,
                            "agent": agent.robot_id,
                            "status": status.value,
                        }
                    )

        if self.step_index % cfg.report_every_steps == 0:
            self.world.score_forecast = forecast_score(self.world)
            for agent in self.agents.values():
                est = agent.estimate
                self._emit(
                    {
                        "type": "report",
                        "t_ms": self.world.t_ms,
                        "agent": agent.robot_id,
                        "x_mm": est.x_mm,
                        "y_mm": est.y_mm,
                        "theta_rad": est.theta_rad,
                        "currentTask": agent.current_task,
                        "lastLeaf": agent.last_leaf,
                        "scoreForecast": self.world.score_forecast,
                    }
                )

        if self.mode_switch_remaining_ms == 0 and self.pending:
            self._drain_pending()
        return self.events_since(start)

    def run_until(self, t_ms: int) -> None:
        while self.world.t_ms < t_ms:
            self.step()

    def run_for(self, duration_ms: int) -> None:
        self.run_until(self.world.t_ms + duration_ms)

    def all_trees_resolved(self) -> bool:
        dispatched = [a for a in self.agents.values() if a.tree is not None]
        return bool(dispatched) and all(
            a.tree_status is not None and a.tree_status.value in ("Success", "Failure")
            for a in dispatched
        )

    def run_to_completion(self, timeout_ms: int | None = None) -> None:
        """Advance until every dispatched tree resolves and no message is
        pending, or until the match/timeout ends."""
        limit = timeout_ms or int(self.world.config.match_duration_s * 1000)
        while self.world.t_ms < limit:
            self.step()
            if self.all_trees_resolved() and not self.pending and self.mode_switch_remaining_ms == 0:
                return

    # -- views ---------------------------------------------------------------

    def state_snapshot(self) -> dict:
        snapshot = self.world.to_dict()
        snapshot["adapterMode"] = self.adapter_mode
        snapshot["modeSwitchRemainingMs"] = self.mode_switch_remaining_ms
        agents = {}
        for agent_id, agent in self.agents.items():
            poses = agent.filter.particles.poses
            stride = max(1, len(poses) // 100)  # decimated cloud for the overlay
            agents[agent_id] = {
                "estimate": list(agent.estimate.pose),
                "currentTask": agent.current_task,
                "treeStatus": agent.tree_status.value if agent.tree_status else None,
                "hasTree": agent.tree is not None,
                "particles": [[float(p[0]), float(p[1])] for p in poses[::stride]],
                "path": [list(w) for w in agent.path.waypoints] if agent.path else None,
            }
        snapshot["agents"] = agents
        return snapshot

    def trees_xml(self) -> dict:
        return {
            agent_id: serialize_xml(agent.tree) if agent.tree else None
            for agent_id, agent in self.agents.items()
        }
