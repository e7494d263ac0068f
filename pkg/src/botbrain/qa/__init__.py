from .answer import CANNOT_ANSWER, Answer, answer_remote, answer_template
from .context import (
    ContextError,
    GripperView,
    OutcomeContext,
    RobotSensors,
    TaskRecord,
    assemble_context,
    validate_context_xml,
)

__all__ = [
    "Answer",
    "CANNOT_ANSWER",
    "ContextError",
    "GripperView",
    "OutcomeContext",
    "RobotSensors",
    "TaskRecord",
    "answer_remote",
    "answer_template",
    "assemble_context",
    "validate_context_xml",
]
