# vim: ai:sw=4:ts=4:sta:et:fo=croql
# pylint: disable=missing-module-docstring,missing-class-docstring,attribute-defined-outside-init
# type: ignore
from fractions import Fraction
from typing import Dict, Tuple

import pytest

from py_fuzzy_potts import association, coupling, edge_measure
from py_fuzzy_potts import graph as graph_mod
from py_fuzzy_potts.common import error

_HALF: Fraction = Fraction(1, 2)
_TRIANGLE: graph_mod.Graph = graph_mod.complete_graph(3)
_PATH: graph_mod.Graph = graph_mod.path_graph(3)


def _marginals(built: coupling.CouplingDistribution) -> Tuple[Dict[int, Fraction], Dict[int, Fraction]]:
    psi_law: Dict[int, Fraction] = {}
    xi_law: Dict[int, Fraction] = {}
    for leaf in built.leaves:
        psi_law[leaf.psi] = psi_law.get(leaf.psi, Fraction(0)) + leaf.prob
        xi_law[leaf.xi] = xi_law.get(leaf.xi, Fraction(0)) + leaf.prob
    return psi_law, xi_law


def test_single_edge_has_one_leaf():
    # Given/When
    result = coupling.build_coupling(graph_mod.complete_graph(2), _HALF, 2, 0, 1)
    # Then
    assert [(leaf.psi, leaf.xi, leaf.prob) for leaf in result.leaves] == [(1, 0, Fraction(1))]
    assert result.edge_open_probability == Fraction(1, 3)


class TestBuildCoupling:
    @pytest.mark.parametrize("rule", list(coupling.EdgeRule))
    @pytest.mark.parametrize(
        "graph,e,x",
        [
            (_TRIANGLE, 0, 0),
            (_TRIANGLE, 2, 2),
            (graph_mod.cycle_graph(4), 1, 2),
            (graph_mod.Graph(vertex_count=3, edges=[(0, 1), (0, 1), (1, 2), (2, 2)]), 0, 1),
        ],
    )
    def test_guarantees_q_ge_1(self, graph: graph_mod.Graph, e: int, x: int, rule: coupling.EdgeRule):
        # Given
        built = coupling.build_coupling(graph, _HALF, 2, e, x, rule=rule)
        # When
        result = coupling.verify_coupling(built, graph, _HALF, 2)
        # Then
        assert built.domination_guaranteed
        assert built.threshold_inversions == 0
        assert sum(leaf.prob for leaf in built.leaves) == 1
        assert all(leaf.order[0] == e for leaf in built.leaves)
        assert all(len(leaf.order) == graph.edge_count for leaf in built.leaves)
        assert result.holds, result

    def test_q_lt_1_reports_failure(self):
        # Given
        built = coupling.build_coupling(_TRIANGLE, _HALF, _HALF, 0, 0)
        # When
        result = coupling.verify_coupling(built, _TRIANGLE, _HALF, _HALF)
        # Then
        assert not built.domination_guaranteed
        assert built.threshold_inversions > 0
        assert result.marginals
        assert not result.domination
        assert not result.holds

    def test_nok_not_incident(self):
        with pytest.raises(error.PreconditionError):
            coupling.build_coupling(_TRIANGLE, _HALF, 2, 0, 2)

    def test_verify_nok_other_measure(self):
        # Given
        built = coupling.build_coupling(_TRIANGLE, _HALF, 2, 0, 0)
        # When/Then
        with pytest.raises(ValueError):
            coupling.verify_coupling(built, _TRIANGLE, "1/3", 2)

    def test_as_report(self):
        # Given
        built = coupling.build_coupling(_TRIANGLE, _HALF, 2, 0, 0, rule=coupling.EdgeRule.HIGHEST_INCIDENT)
        # When
        result = built.as_report()
        # Then
        assert result["rule"] == "highest_incident"
        assert result["x"] == 0
        assert result["e"] == 0
        assert len(result["leaves"]) == len(built.leaves)
        assert all(set(leaf[2]) == {"exact", "decimal"} for leaf in result["leaves"])

    def test_path_thresholds(self):
        # Given: x=0, e=(0, 1); the edge (1, 2) opens with probability 1/3 whether e is open or closed
        oracle = edge_measure.ConditionalOracle(edge_measure.random_cluster(_PATH, _HALF, 2))
        # When
        t_psi = oracle.open_probability(0b01, 0b01, 1)
        t_xi = oracle.open_probability(0b01, 0b00, 1)
        built = coupling.build_coupling(_PATH, _HALF, 2, 0, 0)
        # Then
        assert t_psi == Fraction(1, 3)
        assert t_xi == Fraction(1, 3)
        assert [(leaf.psi, leaf.xi, leaf.prob) for leaf in built.leaves] == [
            (0b11, 0b10, Fraction(1, 3)),
            (0b01, 0b00, Fraction(2, 3)),
        ]

    @pytest.mark.parametrize(
        "graph,e,x",
        [
            (_TRIANGLE, 0, 0),
            (graph_mod.cycle_graph(4), 1, 2),
            (graph_mod.Graph(vertex_count=3, edges=[(0, 1), (0, 1), (1, 2), (2, 2)]), 0, 1),
        ],
    )
    def test_rule_does_not_change_marginals(self, graph: graph_mod.Graph, e: int, x: int):
        # Given
        lowest = coupling.build_coupling(graph, _HALF, 2, e, x, rule=coupling.EdgeRule.LOWEST_INCIDENT)
        highest = coupling.build_coupling(graph, _HALF, 2, e, x, rule=coupling.EdgeRule.HIGHEST_INCIDENT)
        # When/Then
        assert _marginals(lowest) == _marginals(highest)

    def test_rule_changes_order(self):
        # Given
        lowest = coupling.build_coupling(_TRIANGLE, _HALF, 2, 0, 0, rule=coupling.EdgeRule.LOWEST_INCIDENT)
        highest = coupling.build_coupling(_TRIANGLE, _HALF, 2, 0, 0, rule=coupling.EdgeRule.HIGHEST_INCIDENT)
        # When/Then
        assert {leaf.order[1] for leaf in lowest.leaves} == {1}
        assert {leaf.order[1] for leaf in highest.leaves} == {2}


class TestCouplingSampler:
    def test_reproducible(self):
        # Given
        sampler = coupling.CouplingSampler(_TRIANGLE, _HALF, 2, 0, 0)
        # When
        first = sampler.sample_many(20, seed=11)
        second = sampler.sample_many(20, seed=11)
        # Then
        assert first == second
        assert coupling.sample_coupling(_TRIANGLE, _HALF, 2, 0, 0, 11) == first[0]

    def test_samples_are_leaves(self):
        # Given
        built = coupling.build_coupling(_TRIANGLE, _HALF, 2, 0, 0)
        outcomes = {(leaf.psi, leaf.xi) for leaf in built.leaves}
        # When
        result = coupling.CouplingSampler(_TRIANGLE, _HALF, 2, 0, 0).sample_many(50, seed=0)
        # Then
        assert set(result) <= outcomes
        assert all(psi & 1 and not xi & 1 and xi & ~psi == 0 for psi, xi in result)

    @pytest.mark.parametrize("graph", [_PATH, _TRIANGLE])
    def test_frequencies_match_leaves(self, graph: graph_mod.Graph):
        # Given
        count = 10_000
        built = coupling.build_coupling(graph, _HALF, 2, 0, 0)
        # When
        result = coupling.CouplingSampler(graph, _HALF, 2, 0, 0).sample_many(count, seed=0)
        # Then: |freq - p| <= 5 sigma, squared
        assert set(result) == {(leaf.psi, leaf.xi) for leaf in built.leaves}
        for leaf in built.leaves:
            freq = Fraction(result.count((leaf.psi, leaf.xi)), count)
            assert (freq - leaf.prob) ** 2 <= 25 * leaf.prob * (1 - leaf.prob) / count, (leaf, freq)

    def test_nok_count(self):
        with pytest.raises(ValueError):
            coupling.CouplingSampler(_TRIANGLE, _HALF, 2, 0, 0).sample_many(-1, seed=0)


class TestLemma2ViaCoupling:
    def setup_method(self):
        self.built = coupling.build_coupling(_TRIANGLE, _HALF, 2, 0, 0)

    @pytest.mark.parametrize("alpha", ["1/4", _HALF, "3/4"])
    def test_all_upsets(self, alpha: Fraction):
        for event in association.enumerate_upsets(3):
            assert coupling.lemma2_conclusion_via_coupling(self.built, alpha, event)

    def test_covariance_matches_joint(self):
        # Given
        event = association.UpSet.from_members(3, [7])
        # When
        result = coupling.lemma2_conclusion_via_coupling(self.built, _HALF, event)
        # Then
        assert result.details["covariance"] > 0
        assert result.checked == len(self.built.leaves)

    def test_leaf_spin_probability(self):
        # Given: edges 0 and 1 open, one cluster containing x
        event = association.UpSet.from_members(3, [7])
        # When/Then
        assert coupling.coupling_leaf_spin_probability(_TRIANGLE, 0b011, 0, _HALF, event) == 1
        assert coupling.coupling_leaf_spin_probability(_TRIANGLE, 0b001, 0, _HALF, event) == _HALF

    def test_leaf_spin_probability_nok(self):
        with pytest.raises(ValueError):
            coupling.coupling_leaf_spin_probability(
                _TRIANGLE, 0, 0, _HALF, association.UpSet.coordinate_is_one(2, 0)
            )


def test_edge_probability_matches_random_cluster():
    # Given
    built = coupling.build_coupling(_TRIANGLE, "1/3", "3/2", 1, 2)
    # When/Then
    assert built.edge_open_probability == edge_measure.marginal(
        edge_measure.random_cluster(_TRIANGLE, "1/3", "3/2"), 1
    )
