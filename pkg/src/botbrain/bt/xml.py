"""XML strategy format: parse and canonical serialization.

Document layout::

    <root main_tree_to_execute="Main">
      <BehaviorTree ID="Main">
        <Sequence>
          <Action ID="MoveTo" x_mm="500" y_mm="500"/>
          <SubTree ID="grab"/>
        </Sequence>
      </BehaviorTree>
      <BehaviorTree ID="grab">...</BehaviorTree>
    </root>

Composites use their kind as element name; leaves are ``Action``,
``Condition`` and ``SubTree`` carrying an ``ID`` attribute. All other
attributes are node parameters.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .errors import CycleError, MissingMainTreeError, SchemaError, XmlSyntaxError
from .model import (
    COMPOSITE_KINDS,
    BehaviorTree,
    BtNode,
    NodeKind,
    NodeRegistry,
    ParamValue,
)

_KIND_BY_ELEMENT = {k.value: k for k in NodeKind}


def _infer_value(text: str) -> ParamValue:
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _format_value(value: ParamValue) -> str:
    if isinstance(value, bool):
        raise SchemaError("bool is not a valid parameter value")
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_node(elem: ET.Element, tree_id: str, path: str) -> BtNode:
    kind = _KIND_BY_ELEMENT.get(elem.tag)
    if kind is None:
        raise SchemaError(f"{path}: unknown element <{elem.tag}>")

    attrs = dict(elem.attrib)
    node_id = attrs.pop("ID", "")
    params = {name: _infer_value(value) for name, value in attrs.items()}
    children = [
        _parse_node(child, tree_id, f"{path}/{i}") for i, child in enumerate(elem)
    ]
    node = BtNode(kind=kind, id=node_id, params=params, children=children)
    _check_structure(node, path)
    return node


def _check_structure(node: BtNode, path: str) -> None:
    n = len(node.children)
    if node.kind in (NodeKind.SEQUENCE, NodeKind.FALLBACK):
        if n < 1:
            raise SchemaError(f"{path}: {node.kind.value} needs at least one child")
    elif node.kind is NodeKind.IF_THEN_ELSE:
        if n != 3:
            raise SchemaError(f"{path}: IfThenElse needs exactly 3 children, got {n}")
    elif node.kind is NodeKind.TIMEOUT:
        if n != 1:
            raise SchemaError(f"{path}: Timeout needs exactly 1 child, got {n}")
        ms = node.params.get("ms")
        if not isinstance(ms, int) or ms <= 0:
            raise SchemaError(f"{path}: Timeout needs a positive integer ms param")
    else:  # leaves
        if n != 0:
            raise SchemaError(f"{path}: {node.kind.value} must not have children")
        if not node.id:
            raise SchemaError(f"{path}: {node.kind.value} needs an ID attribute")
        if node.kind is NodeKind.SUBTREE_REF and node.params:
            raise SchemaError(f"{path}: SubTree takes no parameters")
    if node.kind in COMPOSITE_KINDS and node.id:
        raise SchemaError(f"{path}: {node.kind.value} must not carry an ID")


def _check_references(tree: BehaviorTree) -> None:
    if tree.main_tree_id not in tree.trees:
        raise MissingMainTreeError(f"main tree {tree.main_tree_id!r} not defined")
    for tree_id, root in tree.trees.items():
        for node in root.iter_nodes():
            if node.kind is NodeKind.SUBTREE_REF and node.id not in tree.trees:
                raise SchemaError(f"{tree_id}: SubTree references unknown tree {node.id!r}")
    # cycle check over the tree-reference graph
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {tid: WHITE for tid in tree.trees}

    def visit(tid: str) -> None:
        color[tid] = GRAY
        for node in tree.trees[tid].iter_nodes():
            if node.kind is NodeKind.SUBTREE_REF:
                if color[node.id] == GRAY:
                    raise CycleError(f"SubTree cycle through {node.id!r}")
                if color[node.id] == WHITE:
                    visit(node.id)
        color[tid] = BLACK

    for tid in tree.trees:
        if color[tid] == WHITE:
            visit(tid)


def _check_against_registry(tree: BehaviorTree, registry: NodeRegistry) -> None:
    from .validate import validate

    violations = validate(tree, registry)
    if violations:
        first = violations[0]
        raise SchemaError(f"{first.path}: {first.reason}" + (
            f" (+{len(violations) - 1} more)" if len(violations) > 1 else ""
        ))


def parse_xml(text: str, registry: NodeRegistry | None = None) -> BehaviorTree:
    """Parse a strategy document.

    Structural invariants (element names, arities, SubTree resolution,
    acyclicity, main tree presence) are always enforced. Registry
    conformance of leaf ids and parameters is enforced only when a
    registry is passed; use :func:`botbrain.bt.validate.validate` to get
    conformance problems as data instead.
    """
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise XmlSyntaxError(str(exc)) from exc

    if root.tag != "root":
        raise SchemaError(f"document element must be <root>, got <{root.tag}>")
    main_id = root.attrib.get("main_tree_to_execute")
    if not main_id:
        raise MissingMainTreeError("missing main_tree_to_execute attribute")

    trees: dict[str, BtNode] = {}
    for elem in root:
        if elem.tag != "BehaviorTree":
            raise SchemaError(f"unexpected element <{elem.tag}> under <root>")
        tree_id = elem.attrib.get("ID")
        if not tree_id:
            raise SchemaError("BehaviorTree is missing its ID attribute")
        if tree_id in trees:
            raise SchemaError(f"duplicate BehaviorTree ID {tree_id!r}")
        children = list(elem)
        if len(children) != 1:
            raise SchemaError(f"{tree_id}: BehaviorTree needs exactly one root node")
        trees[tree_id] = _parse_node(children[0], tree_id, tree_id)

    tree = BehaviorTree(trees=trees, main_tree_id=main_id)
    _check_references(tree)
    if registry is not None:
        _check_against_registry(tree, registry)
    return tree


def _emit_node(node: BtNode, parent: ET.Element) -> None:
    elem = ET.SubElement(parent, node.kind.value)
    if node.id:
        elem.set("ID", node.id)
    for name in sorted(node.params):
        elem.set(name, _format_value(node.params[name]))
    for child in node.children:
        _emit_node(child, elem)


def serialize_xml(tree: BehaviorTree) -> str:
    """Canonical serialization: main tree first, others sorted by id,
    parameters in name order. Deterministic byte-for-byte."""
    root = ET.Element("root", {"main_tree_to_execute": tree.main_tree_id})
    order = [tree.main_tree_id] + sorted(t for t in tree.trees if t != tree.main_tree_id)
    for tree_id in order:
        holder = ET.SubElement(root, "BehaviorTree", {"ID": tree_id})
        _emit_node(tree.trees[tree_id], holder)
    ET.indent(root, space="  ")
    return ET.tostring(root, encoding="unicode") + "\n"
