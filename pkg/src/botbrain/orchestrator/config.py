"""Session configuration: field, navigation, filter, adapter delays and
backend endpoints. Loadable from TOML or JSON."""

from __future__ import annotations

import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass
class NavConfig:
    inflation_mm: float = 180.0
    step_mm: float = 100.0
    goal_bias: float = 0.05
    max_iters: int = 3000
    goal_tol_mm: float = 20.0
    vmax_mm_s: float = 600.0
    amax_mm_s2: float = 900.0
    replan_every_steps: int = 4
    d_full_mm: float = 600.0
    d_stop_mm: float = 250.0


@dataclass
class FilterConfig:
    n_particles: int = 1000
    sigma_r_mm: float = 10.0
    sigma_b_rad: float = 0.02
    gate_mm: float = 500.0
    process_sigma_xy_mm: float = 2.0
    process_sigma_theta_rad: float = 0.005
    wheel_slip_sigma: float = 0.01
    lidar_slip_sigma: float = 0.02
    beacon_every_steps: int = 4
    init_spread_mm: float = 20.0
    init_spread_rad: float = 0.02
    weighting: dict = field(default_factory=lambda: {"wheel": 0.4, "lidarScan": 0.4, "cv": 0.2})


@dataclass
class BackendConfig:
    name: str = "oracle"  # oracle | faulty | remote
    drop_prob: float = 0.2
    swap_prob: float = 0.0
    seed: int = 0
    endpoint: str = ""


@dataclass
class AnswererConfig:
    name: str = "template"  # template | remote
    endpoint: str = ""


@dataclass
class OrchestratorConfig:
    field_overrides: dict = field(default_factory=dict)
    nav: NavConfig = field(default_factory=NavConfig)
    filter: FilterConfig = field(default_factory=FilterConfig)
    backend: BackendConfig = field(default_factory=BackendConfig)
    answerer: AnswererConfig = field(default_factory=AnswererConfig)
    adapter_switch_ms: int = 40000
    dt_ms: int = 25
    bt_tick_every_steps: int = 4  # 10 Hz tree ticks on 40 Hz physics
    report_every_steps: int = 20  # 500 ms status reports

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "OrchestratorConfig":
        data = dict(data)
        kwargs = {}
        for key, sub in (("nav", NavConfig), ("filter", FilterConfig),
                         ("backend", BackendConfig), ("answerer", AnswererConfig)):
            if key in data:
                kwargs[key] = sub(**data.pop(key))
        kwargs.update(data)
        return cls(**kwargs)


def load_config(path: str | Path) -> OrchestratorConfig:
    path = Path(path)
    if path.suffix == ".json":
        return OrchestratorConfig.from_dict(json.loads(path.read_text()))
    with path.open("rb") as fh:
        return OrchestratorConfig.from_dict(tomllib.load(fh))
