# vim: ai:sw=4:ts=4:sta:et:fo=croql
# pylint: disable=missing-module-docstring,missing-class-docstring,attribute-defined-outside-init
# type: ignore
from fractions import Fraction

import pytest

from py_fuzzy_potts import suite
from py_fuzzy_potts import graph as graph_mod


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("graph", [graph_mod.complete_graph(2), graph_mod.path_graph(3), graph_mod.complete_graph(3)])
def test_es_check(graph: graph_mod.Graph, q: int):
    # Given/When
    result = suite.es_check(graph, Fraction(1, 3), q)
    # Then
    assert result == {"q": q, "equal": True, "max_difference": Fraction(0)}


@pytest.mark.slow
def test_run_suite_light_small_corpus():
    # Given
    corpus = [graph_mod.complete_graph(2), graph_mod.path_graph(3), graph_mod.complete_graph(3)]
    # When
    result = suite.run_suite(corpus)
    # Then
    assert [item.criterion for item in result] == list(range(1, 10))
    # criterion 8 needs a corpus graph that fails off the boundary
    failing = [item.as_dict(for_json=True) for item in result if not item.holds and item.criterion != 8]
    assert not failing, failing
    assert result[4].details == {"signs": [1, 1, 1, 1, 1, 0, -1]}
    assert result[8].details == {"counts": suite.DEDEKIND}


@pytest.mark.slow
def test_run_suite_default_corpus():
    # Given/When
    result = suite.run_suite()
    # Then
    assert all(item.holds for item in result), [item.name for item in result if not item.holds]
