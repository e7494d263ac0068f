"""Behavior-tree error types."""


class BtError(Exception):
    pass


class XmlSyntaxError(BtError):
    """Input is not well-formed XML."""


class SchemaError(BtError):
    """Structure or parameters violate the tree schema or registry signature."""


class CycleError(BtError):
    """SubTree references form a cycle."""


class MissingMainTreeError(BtError):
    """The declared main tree id is absent from the document."""


class HandlerMissingError(BtError):
    """A leaf id has no bound handler on the blackboard."""
