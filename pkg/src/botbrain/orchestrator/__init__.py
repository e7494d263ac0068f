from .agent import AgentRuntime, MotionState
from .config import (
    AnswererConfig,
    BackendConfig,
    FilterConfig,
    NavConfig,
    OrchestratorConfig,
    load_config,
)
from .persistence import (
    CorruptLogError,
    canonical_line,
    persist,
    read_log,
    replay,
    restore,
)
from .session import MODE_BT_GEN, MODE_QA, Session, SessionStats

__all__ = [
    "AgentRuntime",
    "AnswererConfig",
    "BackendConfig",
    "CorruptLogError",
    "FilterConfig",
    "MODE_BT_GEN",
    "MODE_QA",
    "MotionState",
    "NavConfig",
    "OrchestratorConfig",
    "Session",
    "SessionStats",
    "canonical_line",
    "load_config",
    "persist",
    "read_log",
    "replay",
    "restore",
]
