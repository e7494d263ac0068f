import pytest

from botbrain.bt import (
    BehaviorTree,
    BtNode,
    CycleError,
    MissingMainTreeError,
    NodeKind,
    SchemaError,
    XmlSyntaxError,
    default_registry,
    parse_xml,
    serialize_xml,
    validate,
)

MINIMAL = (
    '<root main_tree_to_execute="T"><BehaviorTree ID="T">'
    '<Sequence><Action ID="Wait" ms="100"/></Sequence>'
    "</BehaviorTree></root>"
)


def test_parse_minimal_document():
    tree = parse_xml(MINIMAL)
    assert tree.main_tree_id == "T"
    root = tree.main_root
    assert root.kind is NodeKind.SEQUENCE
    assert len(root.children) == 1
    action = root.children[0]
    assert action.kind is NodeKind.ACTION
    assert action.id == "Wait"
    assert action.params == {"ms": 100}


def test_malformed_xml():
    with pytest.raises(XmlSyntaxError):
        parse_xml("<root><oops")


def test_unknown_element_rejected():
    doc = MINIMAL.replace("Sequence", "Parallel")
    with pytest.raises(SchemaError):
        parse_xml(doc)


def test_subtree_self_reference_is_a_cycle():
    doc = (
        '<root main_tree_to_execute="A"><BehaviorTree ID="A">'
        '<Sequence><SubTree ID="A"/></Sequence>'
        "</BehaviorTree></root>"
    )
    with pytest.raises(CycleError):
        parse_xml(doc)


def test_subtree_two_step_cycle():
    doc = (
        '<root main_tree_to_execute="A">'
        '<BehaviorTree ID="A"><Sequence><SubTree ID="B"/></Sequence></BehaviorTree>'
        '<BehaviorTree ID="B"><Sequence><SubTree ID="A"/></Sequence></BehaviorTree>'
        "</root>"
    )
    with pytest.raises(CycleError):
        parse_xml(doc)


def test_missing_main_tree():
    doc = MINIMAL.replace('main_tree_to_execute="T"', 'main_tree_to_execute="X"')
    with pytest.raises(MissingMainTreeError):
        parse_xml(doc)


def test_unresolved_subtree_reference():
    doc = (
        '<root main_tree_to_execute="A"><BehaviorTree ID="A">'
        '<Sequence><SubTree ID="nowhere"/></Sequence>'
        "</BehaviorTree></root>"
    )
    with pytest.raises(SchemaError):
        parse_xml(doc)


def test_timeout_arity_and_param():
    with pytest.raises(SchemaError):
        parse_xml(
            '<root main_tree_to_execute="T"><BehaviorTree ID="T">'
            '<Timeout ms="100"><Action ID="Wait" ms="1"/><Action ID="Wait" ms="1"/></Timeout>'
            "</BehaviorTree></root>"
        )
    with pytest.raises(SchemaError):
        parse_xml(
            '<root main_tree_to_execute="T"><BehaviorTree ID="T">'
            '<Timeout><Action ID="Wait" ms="1"/></Timeout>'
            "</BehaviorTree></root>"
        )


def test_registry_checks_at_parse_when_registry_given():
    doc = MINIMAL.replace("Wait", "Fly")
    parse_xml(doc)  # structurally fine
    with pytest.raises(SchemaError):
        parse_xml(doc, registry=default_registry())


def all_kinds_tree():
    moveto = BtNode(NodeKind.ACTION, "MoveTo", {"x_mm": 500, "y_mm": 700})
    cond = BtNode(NodeKind.CONDITION, "PathClear", {"x_mm": 500, "y_mm": 700})
    wait = BtNode(NodeKind.ACTION, "Wait", {"ms": 250})
    ite = BtNode(
        NodeKind.IF_THEN_ELSE,
        children=[cond, moveto, BtNode(NodeKind.ACTION, "ReturnToBase")],
    )
    timeout = BtNode(NodeKind.TIMEOUT, params={"ms": 4000}, children=[wait])
    sub = BtNode(NodeKind.SEQUENCE, children=[BtNode(NodeKind.ACTION, "GrabCake", {"gripper": 0})])
    main = BtNode(
        NodeKind.SEQUENCE,
        children=[
            BtNode(NodeKind.FALLBACK, children=[ite, timeout]),
            BtNode(NodeKind.SUBTREE_REF, id="grab"),
        ],
    )
    return BehaviorTree(trees={"main": main, "grab": sub}, main_tree_id="main")


def test_round_trip_all_node_kinds():
    tree = all_kinds_tree()
    text = serialize_xml(tree)
    assert parse_xml(text) == tree


def test_serialization_is_byte_stable():
    tree = BehaviorTree(
        trees={"t": BtNode(NodeKind.SEQUENCE, children=[BtNode(NodeKind.ACTION, "CollectCherries")])},
        main_tree_id="t",
    )
    first = serialize_xml(tree)
    second = serialize_xml(parse_xml(first))
    assert first == second


def test_float_param_formats_canonically():
    tree = BehaviorTree(
        trees={"t": BtNode(NodeKind.SEQUENCE, children=[BtNode(NodeKind.ACTION, "X", {"speed": 1.5})])},
        main_tree_id="t",
    )
    assert 'speed="1.5"' in serialize_xml(tree)


def test_generated_corpus_round_trips():
    # oracle trees over 100 random commands: parse∘serialize is the identity
    from botbrain.strategy import OracleBackend, random_command

    import random

    rng = random.Random(7)
    backend = OracleBackend()
    registry = default_registry()
    for _ in range(100):
        cmd = random_command(rng)
        tree = backend.generate(cmd, registry)
        text = serialize_xml(tree)
        reparsed = parse_xml(text)
        assert reparsed == tree
        assert serialize_xml(reparsed) == text
        assert validate(reparsed, registry) == []
