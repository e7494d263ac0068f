from .engine import Executor
from .errors import (
    BtError,
    CycleError,
    HandlerMissingError,
    MissingMainTreeError,
    SchemaError,
    XmlSyntaxError,
)
from .model import (
    BehaviorTree,
    BtNode,
    NodeKind,
    NodeRegistry,
    NodeSpec,
    ParamSpec,
    TickStatus,
    TickTrace,
    TraceRecord,
    default_registry,
)
from .validate import Violation, validate
from .xml import parse_xml, serialize_xml

__all__ = [
    "BehaviorTree",
    "BtError",
    "BtNode",
    "CycleError",
    "Executor",
    "HandlerMissingError",
    "MissingMainTreeError",
    "NodeKind",
    "NodeRegistry",
    "NodeSpec",
    "ParamSpec",
    "SchemaError",
    "TickStatus",
    "TickTrace",
    "TraceRecord",
    "Violation",
    "XmlSyntaxError",
    "default_registry",
    "parse_xml",
    "serialize_xml",
    "validate",
]
