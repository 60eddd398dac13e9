# vim: ai:sw=4:ts=4:sta:et:fo=croql
# pylint: disable=missing-module-docstring,missing-class-docstring,attribute-defined-outside-init
# type: ignore
import pathlib
from typing import Any, Dict, Tuple

import pytest
from hypothesis import given
from hypothesis import strategies as st

from py_fuzzy_potts import graph as graph_mod
from py_fuzzy_potts.common import error

_TEST_GRAPHS_DIR: pathlib.Path = pathlib.Path(__file__).parent.parent.parent / "test_data" / "graphs"


class TestGraph:
    def setup_method(self):
        self.triangle = graph_mod.complete_graph(3)

    def test_ctor_ok(self):
        # Given/When
        result = graph_mod.Graph(vertex_count=2, edges=[[0, 1], [1, 1]])
        # Then
        assert result.edges == ((0, 1), (1, 1))
        assert result.edge_count == 2
        assert result.config_count == 4
        assert result.is_loop(1)
        assert not result.is_loop(0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"vertex_count": -1},
            {"vertex_count": 2, "edges": [(0, 2)]},
            {"vertex_count": "2"},
        ],
    )
    def test_ctor_nok(self, kwargs: Dict[str, Any]):
        with pytest.raises((ValueError, TypeError)):
            graph_mod.Graph(**kwargs)

    def test_hashable(self):
        assert hash(self.triangle) == hash(graph_mod.complete_graph(3))

    @pytest.mark.parametrize("edge,vertex,expected", [(0, 0, True), (0, 2, False), (2, 2, True)])
    def test_is_incident(self, edge: int, vertex: int, expected: bool):
        assert self.triangle.is_incident(edge, vertex) is expected

    @pytest.mark.parametrize("edge", [-1, 3])
    def test_check_edge_nok(self, edge: int):
        with pytest.raises(ValueError):
            self.triangle.check_edge(edge)

    def test_check_edge_nok_no_edges(self):
        with pytest.raises(ValueError):
            graph_mod.Graph(vertex_count=1).check_edge(0)

    def test_open_edges(self):
        assert self.triangle.open_edges(0b101) == (0, 2)


@pytest.mark.parametrize(
    "config,exp_partition,exp_forest",
    [
        (0b000, ((0,), (1,), (2,)), True),
        (0b001, ((0, 1), (2,)), True),
        (0b100, ((0, 2), (1,)), True),
        (0b011, ((0, 1, 2),), True),
        (0b111, ((0, 1, 2),), False),
    ],
)
def test_component_partition_triangle(config: int, exp_partition: Tuple, exp_forest: bool):
    # Given
    triangle = graph_mod.complete_graph(3)
    # When
    result = graph_mod.component_partition(triangle, config)
    # Then
    assert result == exp_partition
    assert graph_mod.component_count(triangle, config) == len(exp_partition)
    assert graph_mod.is_forest(triangle, config) is exp_forest
    assert graph_mod.is_connected(triangle, config) is (len(exp_partition) == 1)


def test_open_loop_is_cycle_but_keeps_components():
    # Given
    obj = graph_mod.Graph(vertex_count=2, edges=[(0, 1), (1, 1)])
    # When/Then
    assert graph_mod.component_count(obj, 0b10) == 2
    assert not graph_mod.is_forest(obj, 0b10)
    assert graph_mod.component_of(obj, 0b01, 1) == (0, 1)


def test_delete_edge():
    # Given/When
    result = graph_mod.delete_edge(graph_mod.complete_graph(3), 1)
    # Then
    assert result == graph_mod.Graph(vertex_count=3, edges=[(0, 1), (0, 2)])


def test_contract_edge_makes_parallel_edges():
    # Given
    triangle = graph_mod.complete_graph(3)
    # When
    result, vertex_map = graph_mod.contract_edge(triangle, 0)
    # Then
    assert vertex_map == (0, 0, 1)
    assert result == graph_mod.Graph(vertex_count=2, edges=[(0, 1), (0, 1)])


def test_contract_edge_makes_loop():
    # Given
    obj = graph_mod.Graph(vertex_count=2, edges=[(0, 1), (0, 1)])
    # When
    result, _ = graph_mod.contract_edge(obj, 1)
    # Then
    assert result == graph_mod.Graph(vertex_count=1, edges=[(0, 0)])


def test_contract_loop_is_deletion():
    # Given
    obj = graph_mod.Graph(vertex_count=2, edges=[(0, 1), (1, 1)])
    # When
    result, vertex_map = graph_mod.contract_edge(obj, 1)
    # Then
    assert result == graph_mod.Graph(vertex_count=2, edges=[(0, 1)])
    assert vertex_map == (0, 1)


@given(config=st.integers(min_value=0, max_value=(1 << 6) - 1), edge=st.integers(min_value=0, max_value=5))
def test_drop_insert_bit_inverse(config: int, edge: int):
    value = config >> edge & 1
    assert graph_mod.insert_bit(graph_mod.drop_bit(config, edge), edge, value) == config


def test_edge_restriction():
    assert graph_mod.edge_restriction(0b1010, (1, 2, 3)) == 0b101


def test_figure1_graph():
    # Given/When
    result = graph_mod.figure1_graph(2)
    # Then
    assert result.m == 2
    assert (result.x, result.y, result.e) == (0, 1, 0)
    assert result.graph.vertex_count == 4
    assert result.graph.edges == ((0, 1), (0, 2), (2, 1), (0, 3), (3, 1))


@pytest.mark.parametrize(
    "name,size,exp_vertices,exp_edges",
    [
        ("complete", 4, 4, 6),
        ("PATH", 4, 4, 3),
        ("cycle", 4, 4, 4),
        ("cycle", 2, 2, 2),
        ("star", 5, 5, 4),
        ("figure1", 3, 5, 7),
    ],
)
def test_family(name: str, size: int, exp_vertices: int, exp_edges: int):
    # Given/When
    result = graph_mod.family(name, size)
    # Then
    assert result.vertex_count == exp_vertices
    assert result.edge_count == exp_edges


def test_family_nok():
    with pytest.raises(ValueError):
        graph_mod.family("wheel", 4)


@pytest.mark.parametrize(
    "max_vertices,max_edges,min_vertices,expected",
    [
        (1, 0, None, 1),
        (3, 3, None, 2),  # path and triangle
        (4, 6, None, 6),
        (4, 3, None, 2),  # the two trees
        (4, 6, 1, 10),
        (5, 10, None, 21),
    ],
)
def test_enumerate_connected_graphs(max_vertices: int, max_edges: int, min_vertices: int, expected: int):
    # Given/When
    result = graph_mod.enumerate_connected_graphs(max_vertices, max_edges, min_vertices=min_vertices)
    # Then
    assert len(result) == expected
    assert len(set(result)) == expected
    assert [graph.vertex_count for graph in result] == sorted(graph.vertex_count for graph in result)


def test_to_networkx_keeps_multiedges():
    # Given
    obj = graph_mod.Graph(vertex_count=2, edges=[(0, 1), (0, 1), (1, 1)])
    # When
    result = graph_mod.to_networkx(obj)
    # Then
    assert result.number_of_edges() == 3
    assert result.number_of_nodes() == 2


class TestParseGraph:
    @pytest.mark.parametrize(
        "filename,expected",
        [
            ("triangle.txt", graph_mod.Graph(vertex_count=3, edges=[(0, 1), (1, 2), (0, 2)])),
            ("two_edges.txt", graph_mod.Graph(vertex_count=4, edges=[(0, 1), (2, 3)])),
            ("multigraph.txt", graph_mod.Graph(vertex_count=2, edges=[(0, 1), (0, 1), (1, 1)])),
        ],
    )
    def test_load_graph_ok(self, filename: str, expected: graph_mod.Graph):
        assert graph_mod.load_graph(_TEST_GRAPHS_DIR / filename) == expected

    def test_load_graph_nok_line_number(self):
        with pytest.raises(error.GraphParseError) as err:
            graph_mod.load_graph(_TEST_GRAPHS_DIR / "bad_edge.txt")
        assert err.value.line_number == 3

    @pytest.mark.parametrize(
        "text,line_number",
        [
            ("", 1),
            ("0 1\n", 1),
            ("vertices 2\n0 2\n", 2),
            ("vertices 2\n0 1 1\n", 2),
        ],
    )
    def test_parse_graph_nok(self, text: str, line_number: int):
        with pytest.raises(error.GraphParseError) as err:
            graph_mod.parse_graph(text)
        assert err.value.line_number == line_number

    def test_load_graph_nok_missing_file(self):
        with pytest.raises(ValueError):
            graph_mod.load_graph(_TEST_GRAPHS_DIR / "no_such_graph.txt")

    @pytest.mark.parametrize("size", [1, 3, 5])
    def test_dump_parse(self, size: int):
        # Given
        obj = graph_mod.cycle_graph(size)
        # When/Then
        assert graph_mod.parse_graph(graph_mod.dump_graph(obj)) == obj
