from .backends import FaultInjectingBackend, OracleBackend, RemoteBackend, make_backend
from .command import (
    BASKETS,
    CAKE_COLORS,
    Command,
    CommandError,
    TaskSpec,
    TaskType,
    parse_command_text,
    random_command,
    random_task,
    render_command_text,
)
from .errors import GenerationRejected, NetworkError, StrategyError, UnknownTaskTypeError
from .scoring import IntegrationScore, task_integration_score
from .templates import SYSTEM_PROMPT, expand_command, expand_task

__all__ = [
    "BASKETS",
    "CAKE_COLORS",
    "Command",
    "CommandError",
    "FaultInjectingBackend",
    "GenerationRejected",
    "IntegrationScore",
    "NetworkError",
    "OracleBackend",
    "RemoteBackend",
    "StrategyError",
    "SYSTEM_PROMPT",
    "TaskSpec",
    "TaskType",
    "UnknownTaskTypeError",
    "expand_command",
    "expand_task",
    "make_backend",
    "parse_command_text",
    "random_command",
    "random_task",
    "render_command_text",
    "task_integration_score",
]
