# vim: ai:sw=4:ts=4:sta:et:fo=croql
# pylint: disable=missing-module-docstring,missing-class-docstring,attribute-defined-outside-init
# type: ignore
from fractions import Fraction
from typing import Any, Dict

import pytest

from py_fuzzy_potts import edge_measure
from py_fuzzy_potts import graph as graph_mod
from py_fuzzy_potts import spin_measure
from py_fuzzy_potts.common import config, error

_HALF: Fraction = Fraction(1, 2)
_K2: graph_mod.Graph = graph_mod.complete_graph(2)
_TRIANGLE: graph_mod.Graph = graph_mod.complete_graph(3)


class TestSpinMeasure:
    def test_ctor_ok(self):
        # Given/When
        result = spin_measure.SpinMeasure(vertex_count=1, colors=[-1, 1], prob=[Fraction(1, 3), Fraction(2, 3)])
        # Then
        assert result.coordinate_count == 1
        assert result.color_of(1, 0) == 1
        assert result.probability([1]) == Fraction(2, 3)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"vertex_count": 1, "colors": [1], "prob": [Fraction(1)]},
            {"vertex_count": 1, "colors": [1, 1], "prob": [_HALF, _HALF]},
            {"vertex_count": 2, "colors": [-1, 1], "prob": [_HALF, _HALF]},
            {"vertex_count": 1, "colors": [-1, 1], "prob": [_HALF, Fraction(1, 3)]},
        ],
    )
    def test_ctor_nok(self, kwargs: Dict[str, Any]):
        with pytest.raises(ValueError):
            spin_measure.SpinMeasure(**kwargs)

    def test_coordinate_count_nok_three_colors(self):
        # Given
        obj = spin_measure.SpinMeasure(vertex_count=1, colors=[0, 1, 2], prob=[Fraction(1, 3)] * 3)
        # When/Then
        with pytest.raises(ValueError):
            _ = obj.coordinate_count


@pytest.mark.parametrize(
    "colors,spins,expected",
    [
        ((-1, 1), (1, -1, 1), 0b101),
        ((-1, 1), (-1, -1), 0),
        ((0, 1, 2), (2, 1), 2 + 1 * 3),
    ],
)
def test_spin_rank(colors: tuple, spins: tuple, expected: int):
    assert spin_measure.spin_rank(colors, spins) == expected


def test_fuzzy_beta():
    assert spin_measure.fuzzy_beta("1/4") == {-1: Fraction(3, 4), 1: Fraction(1, 4)}


@pytest.mark.parametrize("alpha", [0, 1, "3/2", 0.5])
def test_fuzzy_beta_nok(alpha: Any):
    with pytest.raises((ValueError, TypeError)):
        spin_measure.fuzzy_beta(alpha)


class TestFuzzyPotts:
    def setup_method(self):
        self.phi = edge_measure.random_cluster(_K2, _HALF, 2)

    def test_single_edge(self):
        # Given/When
        result = spin_measure.fuzzy_potts(self.phi, _HALF)
        # Then
        assert result.colors == spin_measure.PLUS_MINUS
        assert result.prob == (Fraction(1, 3), Fraction(1, 6), Fraction(1, 6), Fraction(1, 3))

    def test_joint_marginals(self):
        # Given/When
        result = spin_measure.joint_fuzzy_potts(self.phi, _HALF)
        # Then
        assert len(result.entries) == 6
        assert result.edge_marginal() == self.phi
        assert result.spin_marginal() == spin_measure.fuzzy_potts(self.phi, _HALF)

    def test_joint_nok_cap(self):
        with pytest.raises(error.SizeCapError):
            spin_measure.joint_fuzzy_potts(self.phi, _HALF, caps=config.Caps(max_joint_bits=2))

    def test_plc_ok_q_ge_1(self):
        for alpha in ("1/4", _HALF, "3/4"):
            measure = spin_measure.fuzzy_potts(edge_measure.random_cluster(_TRIANGLE, _HALF, 2), alpha)
            assert spin_measure.plc_check_spin(measure)

    def test_flip_symmetry_half(self):
        # Given
        measure = spin_measure.fuzzy_potts(edge_measure.random_cluster(_TRIANGLE, "1/3", 2), _HALF)
        # When/Then
        assert spin_measure.flip(measure) == measure

    def test_flip_swaps_alpha(self):
        # Given
        phi = edge_measure.random_cluster(_TRIANGLE, "1/3", 2)
        # When
        result = spin_measure.flip(spin_measure.fuzzy_potts(phi, "1/4"))
        # Then
        assert result == spin_measure.fuzzy_potts(phi, "3/4")


class TestJointMeasure:
    @pytest.mark.parametrize(
        "entries",
        [
            [(0, 0, _HALF), (0, 0, _HALF)],  # not strictly sorted
            [(2, 0, Fraction(1))],  # edge rank out of range
            [(0, 0, _HALF)],  # not normalized
        ],
    )
    def test_ctor_nok(self, entries):
        with pytest.raises(ValueError):
            spin_measure.JointMeasure(graph=_K2, colors=spin_measure.PLUS_MINUS, entries=entries)


def test_partition_measure():
    # Given
    phi = edge_measure.random_cluster(_K2, _HALF, 2)
    # When
    result = spin_measure.partition_measure_from_edge_measure(phi)
    # Then
    assert result.as_dict() == {((0,), (1,)): Fraction(2, 3), ((0, 1),): Fraction(1, 3)}


def test_partition_measure_nok():
    with pytest.raises(ValueError):
        spin_measure.PartitionMeasure(vertex_count=2, entries=[(((0,),), Fraction(1))])


def test_divide_and_color_matches_fuzzy_potts():
    # Given
    phi = edge_measure.random_cluster(_TRIANGLE, _HALF, 2)
    partitions = spin_measure.partition_measure_from_edge_measure(phi)
    # When
    result = spin_measure.divide_and_color(partitions, spin_measure.fuzzy_beta("1/3"))
    # Then
    assert result == spin_measure.fuzzy_potts(phi, "1/3")


@pytest.mark.parametrize(
    "beta",
    [
        {1: Fraction(1)},
        {0: _HALF, 1: Fraction(1, 3)},
    ],
)
def test_divide_and_color_nok(beta):
    partitions = spin_measure.partition_measure_from_edge_measure(edge_measure.product_measure(_K2, _HALF))
    with pytest.raises(ValueError):
        spin_measure.divide_and_color(partitions, beta)


class TestPottsGibbs:
    def test_single_edge(self):
        # Given/When
        result = spin_measure.potts_gibbs(_K2, _HALF, 2)
        # Then
        assert result.prob == (Fraction(1, 3), Fraction(1, 6), Fraction(1, 6), Fraction(1, 3))

    @pytest.mark.parametrize("q", [2, 3])
    @pytest.mark.parametrize("graph", [_TRIANGLE, graph_mod.path_graph(3)])
    def test_edwards_sokal(self, graph: graph_mod.Graph, q: int):
        # Given
        phi = edge_measure.random_cluster(graph, _HALF, q)
        beta = {color: Fraction(1, q) for color in range(q)}
        # When
        colored = spin_measure.divide_and_color(spin_measure.partition_measure_from_edge_measure(phi), beta)
        # Then
        assert spin_measure.potts_gibbs(graph, _HALF, q) == colored

    @pytest.mark.parametrize("q", [1, Fraction(3, 2), "2"])
    def test_nok_q(self, q: Any):
        with pytest.raises((ValueError, TypeError)):
            spin_measure.potts_gibbs(_K2, _HALF, q)


class TestConditionSpin:
    def test_spin(self):
        # Given
        measure = spin_measure.fuzzy_potts(edge_measure.random_cluster(_K2, _HALF, 2), _HALF)
        # When
        result = spin_measure.condition_spin(measure, 0, 1)
        # Then
        assert result.prob == (0, Fraction(1, 3), 0, Fraction(2, 3))

    def test_joint(self):
        # Given
        joint = spin_measure.joint_fuzzy_potts(edge_measure.random_cluster(_K2, _HALF, 2), _HALF)
        # When
        result = spin_measure.condition_spin(joint, 1, -1)
        # Then
        assert all(rank >> 1 & 1 == 0 for _, rank, _ in result.entries)
        assert result.spin_marginal().prob == (Fraction(2, 3), Fraction(1, 3), 0, 0)

    def test_nok_null_event(self):
        # Given
        measure = spin_measure.SpinMeasure(vertex_count=1, colors=[-1, 1], prob=[Fraction(1), Fraction(0)])
        # When/Then
        with pytest.raises(error.PreconditionError):
            spin_measure.condition_spin(measure, 0, 1)

    @pytest.mark.parametrize("vertex,color", [(2, 1), (0, 0)])
    def test_nok_args(self, vertex: int, color: int):
        measure = spin_measure.fuzzy_potts(edge_measure.random_cluster(_K2, _HALF, 2), _HALF)
        with pytest.raises(ValueError):
            spin_measure.condition_spin(measure, vertex, color)


class TestRestrictSpin:
    def test_single_vertex(self):
        # Given
        measure = spin_measure.fuzzy_potts(edge_measure.random_cluster(_K2, _HALF, 2), "1/4")
        # When
        result = spin_measure.restrict_spin(measure, [1])
        # Then
        assert result.vertex_count == 1
        assert result.prob == (Fraction(3, 4), Fraction(1, 4))

    def test_reorders_vertices(self):
        # Given
        measure = spin_measure.fuzzy_potts(edge_measure.random_cluster(graph_mod.path_graph(3), "1/3", 2), "1/4")
        # When
        result = spin_measure.restrict_spin(measure, [2, 0])
        # Then
        for rank in range(4):
            sigma_2, sigma_0 = rank & 1, rank >> 1 & 1
            expected = measure.prob[sigma_0 | sigma_2 << 2] + measure.prob[sigma_0 | 1 << 1 | sigma_2 << 2]
            assert result.prob[rank] == expected

    def test_all_vertices_is_identity(self):
        # Given
        measure = spin_measure.fuzzy_potts(edge_measure.random_cluster(_TRIANGLE, "1/3", 2), "1/4")
        # When/Then
        assert spin_measure.restrict_spin(measure, [0, 1, 2]) == measure

    def test_three_colors(self):
        # Given
        measure = spin_measure.potts_gibbs(_K2, _HALF, 3)
        # When
        result = spin_measure.restrict_spin(measure, [0])
        # Then
        assert result.colors == measure.colors
        assert result.prob == (Fraction(1, 3),) * 3

    @pytest.mark.parametrize("vertices", [[], [0, 0], [2], [-1]])
    def test_nok_vertices(self, vertices: Any):
        measure = spin_measure.fuzzy_potts(edge_measure.random_cluster(_K2, _HALF, 2), _HALF)
        with pytest.raises(ValueError):
            spin_measure.restrict_spin(measure, vertices)


def test_cluster_coloring_probability():
    # Given: triangle with edge 0 open, clusters {0, 1} and {2}
    event_all_plus = 1 << 0b111
    # When
    free = spin_measure.cluster_coloring_probability(_TRIANGLE, 0b001, Fraction(1, 3), event_all_plus)
    forced = spin_measure.cluster_coloring_probability(_TRIANGLE, 0b001, Fraction(1, 3), event_all_plus, (0,))
    # Then
    assert free == Fraction(1, 9)
    assert forced == Fraction(1, 3)
