import json

import pytest

from coxforge.errors import ParameterError
from coxforge.graphs import (
    ResolutionGraph,
    build_custom_tree,
    build_from_string,
    build_singularity,
)


def test_chain_builder():
    g = build_singularity("A", 3)
    assert g.nodes == (1, 2, 3)
    assert g.edges == ((1, 2), (2, 3))
    assert g.leaf_variables == (("x1", 1), ("x3", 3))
    assert g.label == "A3"
    assert g.center() is None
    assert g.curve_order() == (1, 2, 3)


def test_single_node_chain_gets_two_sections():
    g = build_singularity("A", 1)
    assert g.nodes == (1,)
    assert g.edges == ()
    assert g.leaf_variables == (("x1", 1), ("x1p", 1))


def test_fork_builder():
    g = build_singularity("D", 6)
    assert g.nodes == (0, 1, 2, 3, 4, 5)
    assert g.edges == ((0, 1), (0, 2), (0, 3), (3, 4), (4, 5))
    assert g.leaf_variables == (("x1", 1), ("x2", 2), ("x5", 5))
    assert g.center() == 0
    assert g.branches() == ((1,), (2,), (3, 4, 5))
    assert g.branch_ends() == (1, 2, 5)
    assert g.curve_order() == (1, 2, 0, 3, 4, 5)


def test_exceptional_builder():
    g = build_singularity("E", 7)
    assert g.edges == ((0, 1), (0, 2), (0, 4), (2, 3), (4, 5), (5, 6))
    assert g.leaf_variables == (("x1", 1), ("x3", 3), ("x6", 6))
    assert g.branches() == ((1,), (2, 3), (4, 5, 6))
    assert g.curve_order() == (1, 2, 3, 0, 4, 5, 6)


def test_custom_tree_matches_fork_and_star():
    assert build_custom_tree([1, 1, 1]) == build_singularity("D", 4)
    assert build_custom_tree([1, 2, 2]) == build_singularity("E", 6)
    assert build_custom_tree([1, 1, 2]) == build_singularity("D", 5)


def test_custom_tree_numbering():
    g = build_custom_tree([2, 2, 3])
    assert g.nodes == tuple(range(8))
    assert g.branches() == ((1, 2), (3, 4), (5, 6, 7))
    assert g.leaf_variables == (("x2", 2), ("x4", 4), ("x7", 7))
    assert g.curve_order() == (1, 2, 3, 4, 0, 5, 6, 7)
    assert g.label == "custom:2,2,3"


def test_builder_rank_errors():
    with pytest.raises(ParameterError):
        build_singularity("A", 0)
    with pytest.raises(ParameterError):
        build_singularity("D", 3)
    with pytest.raises(ParameterError):
        build_singularity("E", 5)
    with pytest.raises(ParameterError):
        build_singularity("F", 4)
    with pytest.raises(ParameterError):
        build_custom_tree([1, 1])
    with pytest.raises(ParameterError):
        build_custom_tree([0, 1, 1])


def test_build_from_string():
    assert build_from_string("D5") == build_singularity("D", 5)
    assert build_from_string("a3") == build_singularity("A", 3)
    assert build_from_string("custom:2,2,3") == build_custom_tree([2, 2, 3])
    for bad in ("", "Q4", "Dx", "custom:1,q", "7"):
        with pytest.raises(ParameterError):
            build_from_string(bad)


def test_graph_validation():
    with pytest.raises(ParameterError):
        ResolutionGraph([1, 2, 3], [(1, 2), (2, 3), (1, 3)])  # cycle
    with pytest.raises(ParameterError):
        ResolutionGraph([1, 2], [(1, 1)])  # loop
    with pytest.raises(ParameterError):
        ResolutionGraph([1, 2], [(1, 3)])  # unknown node
    with pytest.raises(ParameterError):
        ResolutionGraph([1, 2], [])  # disconnected
    with pytest.raises(ParameterError):
        ResolutionGraph([1], [], leaf_variables=[("x1", 2)])
    with pytest.raises(ParameterError):
        ResolutionGraph([1], [], leaf_variables=[("x1", 1), ("x1", 1)])


def test_definiteness():
    for label in ("A1", "A5", "D4", "D9", "E6", "E7", "E8"):
        assert build_from_string(label).is_negative_definite(), label
    assert not build_custom_tree([2, 2, 3]).is_negative_definite()
    assert not build_custom_tree([2, 3, 6]).is_negative_definite()
    assert build_custom_tree([1, 2, 3]).is_negative_definite()  # same tree as E7


def test_paths():
    g = build_singularity("D", 5)
    assert g.path(1, 4) == (1, 0, 3, 4)
    assert g.path(4, 1) == (4, 3, 0, 1)
    assert g.path(2, 2) == (2,)
    assert g.distance(1, 4) == 3


def test_intersection_matrix_and_grading():
    g = build_singularity("D", 4)
    assert g.intersection_matrix() == [
        [-2, 1, 1, 1],
        [1, -2, 0, 0],
        [1, 0, -2, 0],
        [1, 0, 0, -2],
    ]
    gr = g.grading()
    assert gr.variables == ("x1", "x2", "x3", "y0", "y1", "y2", "y3")
    assert gr.matrix == (
        (0, 0, 0, -2, 1, 1, 1),
        (1, 0, 0, 1, -2, 0, 0),
        (0, 1, 0, 1, 0, -2, 0),
        (0, 0, 1, 1, 0, 0, -2),
    )


def test_unit_degree():
    g = build_singularity("E", 6)
    assert g.unit_degree(0) == (1, 0, 0, 0, 0, 0)
    assert g.unit_degree(5) == (0, 0, 0, 0, 0, 1)
    assert g.zero_degree() == (0,) * 6


def test_json_round_trip():
    for label in ("A1", "A4", "D7", "E8", "custom:2,2,3"):
        g = build_from_string(label)
        blob = json.dumps(g.to_dict(), sort_keys=True)
        back = ResolutionGraph.from_dict(json.loads(blob))
        assert back == g
        assert back.label == g.label
