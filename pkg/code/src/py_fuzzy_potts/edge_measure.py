# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""
Exact probability measures on edge configurations and the checks run on them.

Tables are dense: entry ``r`` is the probability of the configuration with rank ``r``
(see :py:mod:`py_fuzzy_potts.graph`). All arithmetic is :py:class:`fractions.Fraction`.
"""
import operator
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import attrs
import cachetools

from py_fuzzy_potts import graph as graph_mod
from py_fuzzy_potts import lattice
from py_fuzzy_potts.common import config, const, error, logger, preprocess
from py_fuzzy_potts.dto import verdict

_LOGGER = logger.get(__name__)
_CONDITIONAL_CACHE_SIZE: int = 1 << 14

EdgeParameters = Union[Fraction, int, str, Sequence[Union[Fraction, int, str]]]


def _prob_converter(value: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return tuple(Fraction(val) for val in value)


@attrs.define(**const.ATTRS_DEFAULTS)  # type: ignore
class EdgeMeasure:
    """Probability table over the ``2^|E|`` configurations of ``graph``."""

    graph: graph_mod.Graph = attrs.field(validator=attrs.validators.instance_of(graph_mod.Graph))
    prob: Tuple[Fraction, ...] = attrs.field(converter=_prob_converter)

    @prob.validator
    def _prob_validator(self, attribute: attrs.Attribute, value: Tuple[Fraction, ...]) -> None:
        if len(value) != self.graph.config_count:
            raise ValueError(
                f"Argument '{attribute.name}' must have {self.graph.config_count} entries. Got: {len(value)}"
            )
        if any(val < 0 for val in value):
            raise ValueError(f"Argument '{attribute.name}' has negative entries")
        total = sum(value, Fraction(0))
        if total != 1:
            raise ValueError(f"Argument '{attribute.name}' must sum to exactly 1. Got: {total}")

    @property
    def coordinate_count(self) -> int:
        """Edges are the coordinates of the product order."""
        return self.graph.edge_count

    def support(self) -> List[int]:
        """Ranks with positive probability."""
        return [rank for rank, val in enumerate(self.prob) if val > 0]


def edge_parameters(graph: graph_mod.Graph, p: EdgeParameters) -> Tuple[Fraction, ...]:
    """
    One rational per edge, each strictly inside ``(0, 1)``.

    Args:
        graph: the multigraph.
        p: a single rational used for every edge or one per edge.
    """
    if isinstance(p, (list, tuple)):
        if len(p) != graph.edge_count:
            raise ValueError(f"Argument 'p' needs one value per edge ({graph.edge_count}). Got: {len(p)}")
        result = tuple(preprocess.probability_open(val, f"p[{ndx}]") for ndx, val in enumerate(p))
    else:
        value = preprocess.probability_open(p, "p")
        result = (value,) * graph.edge_count
    return result


def _normalized(graph: graph_mod.Graph, weights: List[Fraction]) -> EdgeMeasure:
    total = sum(weights, Fraction(0))
    if total <= 0:
        raise error.PreconditionError(f"All configuration weights are zero on {graph}")
    return EdgeMeasure(graph=graph, prob=tuple(val / total for val in weights))


def _check_measure_graph(graph: graph_mod.Graph, caps: config.Caps) -> None:
    preprocess.validate_type(graph, "graph", graph_mod.Graph)
    if graph.vertex_count < 1:
        raise ValueError(f"Measures need at least one vertex. Got: {graph}")
    caps.check_edges(graph.edge_count, "edge configurations")


def random_cluster(
    graph: graph_mod.Graph,
    p: EdgeParameters,
    q: Union[Fraction, int, str],
    *,
    caps: config.Caps = config.DEFAULT_CAPS,
) -> EdgeMeasure:
    """
    ``phi(eta) ~ prod_e p_e^eta_e (1 - p_e)^(1 - eta_e) q^k(eta)``.

    ``q`` may be below 1. ``q^k`` for ``q = a/b`` is the exact ``a^k / b^k``.

    Args:
        graph: the multigraph.
        p: edge parameters, see :py:func:`edge_parameters`.
        q: cluster weight, strictly positive.
        caps: enumeration caps.

    Returns:
        Normalized measure.
    """
    _check_measure_graph(graph, caps)
    params = edge_parameters(graph, p)
    q = preprocess.rational(q, "q", lower_bound=Fraction(0), lower_inclusive=False)
    q_powers = [q**k for k in range(graph.vertex_count + 1)]
    weights = []
    for rank in range(graph.config_count):
        weight = q_powers[graph_mod.component_count(graph, rank)]
        for ndx, p_e in enumerate(params):
            weight *= p_e if rank >> ndx & 1 else 1 - p_e
        weights.append(weight)
    _LOGGER.debug("Random cluster measure on %s with q=%s", graph, q)
    return _normalized(graph, weights)


def product_measure(
    graph: graph_mod.Graph, p: EdgeParameters, *, caps: config.Caps = config.DEFAULT_CAPS
) -> EdgeMeasure:
    """Bond percolation, i.e. :py:func:`random_cluster` with ``q = 1``."""
    return random_cluster(graph, p, 1, caps=caps)


def uniform_forest(graph: graph_mod.Graph, *, caps: config.Caps = config.DEFAULT_CAPS) -> EdgeMeasure:
    """Uniform on acyclic configurations; zeros elsewhere."""
    _check_measure_graph(graph, caps)
    weights = [Fraction(1) if graph_mod.is_forest(graph, rank) else Fraction(0) for rank in range(graph.config_count)]
    return _normalized(graph, weights)


def marginal(measure: EdgeMeasure, edge: int) -> Fraction:
    """``Pr(eta_e = 1)``"""
    measure.graph.check_edge(edge)
    return sum((val for rank, val in enumerate(measure.prob) if rank >> edge & 1), Fraction(0))


def tv_distance(measure_a: EdgeMeasure, measure_b: EdgeMeasure) -> Fraction:
    """Half the L1 distance; both measures must live on the same graph."""
    if measure_a.graph != measure_b.graph:
        raise ValueError(f"Total variation needs the same graph. Got: {measure_a.graph} and {measure_b.graph}")
    return sum((abs(val_a - val_b) for val_a, val_b in zip(measure_a.prob, measure_b.prob)), Fraction(0)) / 2


def condition_on_edge(
    measure: EdgeMeasure, edge: int, value: int
) -> Tuple[EdgeMeasure, Tuple[Optional[int], ...]]:
    """
    Conditional law given ``eta_e = value`` moved onto the minor: ``G / e`` for ``value = 1`` and
    ``G - e`` for ``value = 0``.

    Args:
        measure: the measure to condition.
        edge: index of ``e``.
        value: 0 or 1.

    Returns:
        The conditional measure and the edge map ``old index -> new index`` (``None`` for ``e``).

    Raises:
        error.PreconditionError: if ``Pr(eta_e = value) = 0``.
    """
    graph = measure.graph
    graph.check_edge(edge)
    value = preprocess.integer(value, "value", lower_bound=0, upper_bound=1)  # type: ignore
    mass = sum((val for rank, val in enumerate(measure.prob) if (rank >> edge & 1) == value), Fraction(0))
    if mass == 0:
        raise error.PreconditionError(f"Cannot condition on null event eta[{edge}] = {value}")
    minor = graph_mod.contract_edge(graph, edge)[0] if value else graph_mod.delete_edge(graph, edge)
    prob = [measure.prob[graph_mod.insert_bit(rank, edge, value)] / mass for rank in range(minor.config_count)]
    edge_map = tuple(None if ndx == edge else ndx - (ndx > edge) for ndx in range(graph.edge_count))
    return EdgeMeasure(graph=minor, prob=prob), edge_map


def conditional_open_probability(measure: EdgeMeasure, fixed_mask: int, assignment: int, edge: int) -> Fraction:
    """
    ``phi(eta_edge = 1 | eta = assignment on fixed_mask)``.

    Args:
        measure: the measure.
        fixed_mask: edges whose state is conditioned on.
        assignment: their states, only bits inside ``fixed_mask`` are read.
        edge: the edge asked about, outside ``fixed_mask``.

    Raises:
        error.PreconditionError: the conditioning event is null.
    """
    measure.graph.check_edge(edge)
    if fixed_mask >> edge & 1:
        raise ValueError(f"Edge {edge} is already fixed by mask {fixed_mask:b}")
    assignment &= fixed_mask
    total = Fraction(0)
    opened = Fraction(0)
    for rank, val in enumerate(measure.prob):
        if rank & fixed_mask == assignment:
            total += val
            if rank >> edge & 1:
                opened += val
    if total == 0:
        raise error.PreconditionError(f"Null conditioning event: mask {fixed_mask:b}, assignment {assignment:b}")
    return opened / total


class ConditionalOracle:
    """
    Memoised :py:func:`conditional_open_probability` for one measure.
    """

    def __init__(self, measure: EdgeMeasure):
        self._measure: EdgeMeasure = preprocess.validate_type(measure, "measure", EdgeMeasure)  # type: ignore
        self._cache: cachetools.LRUCache = cachetools.LRUCache(maxsize=_CONDITIONAL_CACHE_SIZE)

    @property
    def measure(self) -> EdgeMeasure:
        """The underlying measure."""
        return self._measure

    @cachetools.cachedmethod(operator.attrgetter("_cache"))
    def open_probability(self, fixed_mask: int, assignment: int, edge: int) -> Fraction:
        """``phi(eta_edge = 1 | eta = assignment on fixed_mask)``, ``assignment`` is masked first."""
        return conditional_open_probability(self._measure, fixed_mask, assignment & fixed_mask, edge)


def plc_check(measure: EdgeMeasure) -> verdict.Verdict:
    """``phi(eta) phi(tau) <= phi(eta & tau) phi(eta | tau)`` for every pair of configurations."""
    result = lattice.lattice_condition(measure.prob, check="plc")
    _LOGGER.debug("PLC on %s: %s", measure.graph, result.holds)
    return result


def monotone_conditional_check(measure: EdgeMeasure) -> verdict.Verdict:
    """
    ``phi(eta_e = 1 | eta = xi on F) <= phi(eta_e = 1 | eta = psi on F)`` for all ``F``, ``e`` outside
    ``F`` and ``xi <= psi`` on ``F``. Null conditioning events are skipped.

    Witness order: ``F``, then ``e``, then ``psi``, then ``xi``, each ascending.
    """
    graph = measure.graph
    size = graph.config_count
    checked = 0
    skipped = 0
    for fixed in range(size):
        totals: Dict[int, Fraction] = {}
        opened: Dict[int, List[Fraction]] = {}
        for rank, val in enumerate(measure.prob):
            key = rank & fixed
            totals[key] = totals.get(key, Fraction(0)) + val
            row = opened.setdefault(key, [Fraction(0)] * graph.edge_count)
            for edge in range(graph.edge_count):
                if rank >> edge & 1:
                    row[edge] += val
        free_edges = [edge for edge in range(graph.edge_count) if not fixed >> edge & 1]
        for edge in free_edges:
            for psi in lattice.submasks(fixed):
                for xi in lattice.submasks(psi):
                    if xi == psi:
                        continue
                    if totals[xi] == 0 or totals[psi] == 0:
                        skipped += 1
                        continue
                    checked += 1
                    # cross-multiplied, totals are positive
                    if opened[xi][edge] * totals[psi] > opened[psi][edge] * totals[xi]:
                        return verdict.Verdict(
                            check="monotone_conditional",
                            holds=False,
                            checked=checked,
                            skipped=skipped,
                            witness={
                                "fixed_edges": list(graph.open_edges(fixed)),
                                "edge": edge,
                                "xi": xi,
                                "psi": psi,
                                "given_xi": opened[xi][edge] / totals[xi],
                                "given_psi": opened[psi][edge] / totals[psi],
                            },
                        )
    return verdict.Verdict(check="monotone_conditional", holds=True, checked=checked, skipped=skipped)


def cut_edges(graph: graph_mod.Graph, vertex_mask: int) -> Tuple[int, int, int]:
    """
    Edge masks ``(joining S and its complement, inside S, inside the complement)`` for the vertex set
    ``S`` given as a bit mask. Loops belong to the side of their vertex.
    """
    crossing = inside = outside = 0
    for ndx, (endpoint_a, endpoint_b) in enumerate(graph.edges):
        in_a, in_b = vertex_mask >> endpoint_a & 1, vertex_mask >> endpoint_b & 1
        if in_a != in_b:
            crossing |= 1 << ndx
        elif in_a:
            inside |= 1 << ndx
        else:
            outside |= 1 << ndx
    return crossing, inside, outside


def cut_independence_check(measure: EdgeMeasure) -> verdict.Verdict:
    """
    For every vertex set ``S`` other than the empty and full sets: given that no open edge joins ``S``
    to its complement, the edges inside ``S`` are independent of the edges inside the complement.

    Witness order: ``S`` as a vertex bit mask ascending, then configuration rank.
    """
    graph = measure.graph
    checked = 0
    skipped = 0
    for vertex_mask in range(1, (1 << graph.vertex_count) - 1):
        crossing, inside, outside = cut_edges(graph, vertex_mask)
        total = Fraction(0)
        inside_mass: Dict[int, Fraction] = {}
        outside_mass: Dict[int, Fraction] = {}
        for rank, val in enumerate(measure.prob):
            if rank & crossing:
                continue
            total += val
            inside_mass[rank & inside] = inside_mass.get(rank & inside, Fraction(0)) + val
            outside_mass[rank & outside] = outside_mass.get(rank & outside, Fraction(0)) + val
        if total == 0:
            skipped += 1
            continue
        checked += 1
        for rank, val in enumerate(measure.prob):
            if rank & crossing:
                continue
            # val / total == (inside / total) * (outside / total)
            if val * total != inside_mass[rank & inside] * outside_mass[rank & outside]:
                return verdict.Verdict(
                    check="cut_independence",
                    holds=False,
                    checked=checked,
                    skipped=skipped,
                    witness={
                        "vertex_set": [vertex for vertex in range(graph.vertex_count) if vertex_mask >> vertex & 1],
                        "config": rank,
                        "conditional": val / total,
                        "product_of_marginals": inside_mass[rank & inside] * outside_mass[rank & outside] / total**2,
                    },
                )
    return verdict.Verdict(check="cut_independence", holds=True, checked=checked, skipped=skipped)
