# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""
Spin (color) measures built from edge or partition measures.

A spin configuration over colors ``(c_0, ..., c_{k-1})`` has rank ``sum_v index(sigma_v) * k^v``.
Two-color measures use ``(-1, +1)``, so bit ``v`` of the rank is set iff ``sigma_v = +1`` and the
rank order is the product order used by the association checks.
"""
import itertools
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple, Union

import attrs

from py_fuzzy_potts import edge_measure, lattice
from py_fuzzy_potts import graph as graph_mod
from py_fuzzy_potts.common import config, const, error, logger, preprocess
from py_fuzzy_potts.dto import verdict

_LOGGER = logger.get(__name__)

PLUS_MINUS: Tuple[int, int] = (-1, 1)
"""Two-color order: index 0 is ``-1``, index 1 is ``+1``."""

JointEntry = Tuple[int, int, Fraction]
PartitionEntry = Tuple[graph_mod.Partition, Fraction]


def _colors_converter(value: Sequence[int]) -> Tuple[int, ...]:
    return tuple(int(val) for val in value)


def _prob_converter(value: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return tuple(Fraction(val) for val in value)


def _check_distribution(name: str, values: Sequence[Fraction]) -> None:
    if any(val < 0 for val in values):
        raise ValueError(f"Argument '{name}' has negative entries")
    total = sum(values, Fraction(0))
    if total != 1:
        raise ValueError(f"Argument '{name}' must sum to exactly 1. Got: {total}")


@attrs.define(**const.ATTRS_DEFAULTS)  # type: ignore
class SpinMeasure:
    """Dense table over ``|colors|^vertex_count`` spin configurations."""

    vertex_count: int = attrs.field(validator=attrs.validators.instance_of(int))
    colors: Tuple[int, ...] = attrs.field(converter=_colors_converter)
    prob: Tuple[Fraction, ...] = attrs.field(converter=_prob_converter)

    @colors.validator
    def _colors_validator(self, attribute: attrs.Attribute, value: Tuple[int, ...]) -> None:
        if len(value) < 2 or len(set(value)) != len(value):
            raise ValueError(f"Argument '{attribute.name}' needs at least two distinct colors. Got: {value}")

    @prob.validator
    def _prob_validator(self, attribute: attrs.Attribute, value: Tuple[Fraction, ...]) -> None:
        expected = len(self.colors) ** self.vertex_count
        if len(value) != expected:
            raise ValueError(f"Argument '{attribute.name}' must have {expected} entries. Got: {len(value)}")
        _check_distribution(attribute.name, value)

    @property
    def coordinate_count(self) -> int:
        """Vertices are the coordinates of the product order (two colors only)."""
        self.require_plus_minus()
        return self.vertex_count

    def require_plus_minus(self) -> None:
        """Order-based operations are defined for ``(-1, +1)`` only."""
        if self.colors != PLUS_MINUS:
            raise ValueError(f"Operation needs colors {PLUS_MINUS}. Got: {self.colors}")

    def color_of(self, rank: int, vertex: int) -> int:
        """``sigma_vertex`` for the configuration ``rank``."""
        size = len(self.colors)
        return self.colors[rank // size**vertex % size]

    def probability(self, spins: Sequence[int]) -> Fraction:
        """Probability of the configuration given as one color per vertex."""
        return self.prob[spin_rank(self.colors, spins)]


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class JointMeasure:
    """
    Law of ``(eta, sigma)``. Only nonzero entries are stored, sorted by ``(edge_rank, spin_rank)``.
    """

    graph: graph_mod.Graph = attrs.field(validator=attrs.validators.instance_of(graph_mod.Graph))
    colors: Tuple[int, ...] = attrs.field(converter=_colors_converter)
    entries: Tuple[JointEntry, ...] = attrs.field(converter=tuple)

    @entries.validator
    def _entries_validator(self, attribute: attrs.Attribute, value: Tuple[JointEntry, ...]) -> None:
        spin_count = len(self.colors) ** self.graph.vertex_count
        previous = (-1, -1)
        for edge_rank, rank, _ in value:
            if not (0 <= edge_rank < self.graph.config_count and 0 <= rank < spin_count):
                raise ValueError(f"Argument '{attribute.name}' has an entry out of range: {(edge_rank, rank)}")
            if (edge_rank, rank) <= previous:
                raise ValueError(f"Argument '{attribute.name}' must be strictly sorted. Got {(edge_rank, rank)}")
            previous = (edge_rank, rank)
        _check_distribution(attribute.name, [val for _, _, val in value])

    @property
    def vertex_count(self) -> int:
        """``|V|``"""
        return self.graph.vertex_count

    def edge_marginal(self) -> edge_measure.EdgeMeasure:
        """Law of ``eta``."""
        prob = [Fraction(0)] * self.graph.config_count
        for edge_rank, _, val in self.entries:
            prob[edge_rank] += val
        return edge_measure.EdgeMeasure(graph=self.graph, prob=prob)

    def spin_marginal(self) -> SpinMeasure:
        """Law of ``sigma``."""
        prob = [Fraction(0)] * len(self.colors) ** self.graph.vertex_count
        for _, rank, val in self.entries:
            prob[rank] += val
        return SpinMeasure(vertex_count=self.graph.vertex_count, colors=self.colors, prob=prob)


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class PartitionMeasure:
    """Probability of each partition of the vertices, partitions in canonical form and sorted."""

    vertex_count: int = attrs.field(validator=attrs.validators.instance_of(int))
    entries: Tuple[PartitionEntry, ...] = attrs.field(converter=tuple)

    @entries.validator
    def _entries_validator(self, attribute: attrs.Attribute, value: Tuple[PartitionEntry, ...]) -> None:
        for partition, _ in value:
            if sorted(itertools.chain.from_iterable(partition)) != list(range(self.vertex_count)):
                raise ValueError(f"Argument '{attribute.name}' has a block set that is not a partition: {partition}")
        _check_distribution(attribute.name, [val for _, val in value])

    def as_dict(self) -> Dict[graph_mod.Partition, Fraction]:
        """``partition -> probability``"""
        return dict(self.entries)


def spin_rank(colors: Sequence[int], spins: Sequence[int]) -> int:
    """Rank of the configuration given as one color per vertex."""
    size = len(colors)
    index = {color: ndx for ndx, color in enumerate(colors)}
    return sum(index[spin] * size**vertex for vertex, spin in enumerate(spins))


def fuzzy_beta(alpha: Union[Fraction, int, str]) -> Dict[int, Fraction]:
    """Color distribution ``{-1: 1 - alpha, +1: alpha}`` with ``0 < alpha < 1``."""
    alpha = preprocess.probability_open(alpha, "alpha")
    return {PLUS_MINUS[0]: 1 - alpha, PLUS_MINUS[1]: alpha}


def _validated_beta(beta: Mapping[int, Union[Fraction, int, str]]) -> Tuple[Tuple[int, ...], Tuple[Fraction, ...]]:
    preprocess.validate_type(beta, "beta", Mapping)
    colors = tuple(int(color) for color in beta)
    weights = tuple(preprocess.rational(val, f"beta[{color}]") for color, val in beta.items())
    if len(colors) < 2:
        raise ValueError(f"Argument 'beta' needs at least two colors. Got: {colors}")
    _check_distribution("beta", weights)
    return colors, weights


def _block_colorings(
    partition: graph_mod.Partition, weights: Sequence[Fraction], forced: Mapping[int, int]
) -> Iterator[Tuple[int, Fraction]]:
    """
    ``(spin rank, probability)`` of each coloring constant on blocks, colors drawn independently per
    block from ``weights``. Vertices in ``forced`` (``vertex -> color index``) fix the color of their block
    with probability one.
    """
    size = len(weights)
    block_values = [sum(size**vertex for vertex in block) for block in partition]
    choices: List[Sequence[Tuple[int, Fraction]]] = []
    for block in partition:
        fixed = {forced[vertex] for vertex in block if vertex in forced}
        if len(fixed) > 1:
            return
        if fixed:
            choices.append([(fixed.pop(), Fraction(1))])
        else:
            choices.append(list(enumerate(weights)))
    for combo in itertools.product(*choices):
        prob = Fraction(1)
        rank = 0
        for block_value, (color_index, weight) in zip(block_values, combo):
            prob *= weight
            rank += color_index * block_value
        if prob:
            yield rank, prob


def cluster_coloring_probability(
    graph: graph_mod.Graph, config_rank: int, alpha: Fraction, event_mask: int, forced_plus: Sequence[int] = ()
) -> Fraction:
    """
    ``Pr(sigma in event | eta = config_rank, sigma_v = +1 for v in forced_plus)`` under fuzzy coloring
    with parameter ``alpha``.

    Args:
        graph: the multigraph.
        config_rank: edge configuration.
        alpha: probability of ``+1`` per cluster.
        event_mask: bit ``r`` set iff the two-color spin rank ``r`` is in the event.
        forced_plus: vertices whose cluster is colored ``+1``.
    """
    weights = tuple(fuzzy_beta(alpha).values())
    forced = {vertex: 1 for vertex in forced_plus}
    partition = graph_mod.component_partition(graph, config_rank)
    return sum(
        (prob for rank, prob in _block_colorings(partition, weights, forced) if event_mask >> rank & 1),
        Fraction(0),
    )


def _check_spin_size(vertex_count: int, color_count: int, edge_count: int, caps: config.Caps) -> None:
    bits = (color_count**vertex_count << edge_count).bit_length() - 1
    caps.check_joint_bits(bits, "joint edge/spin table")


def fuzzy_potts(
    measure: edge_measure.EdgeMeasure, alpha: Union[Fraction, int, str], *, caps: config.Caps = config.DEFAULT_CAPS
) -> SpinMeasure:
    """
    ``nu(sigma) = sum_eta phi(eta) prod_clusters (alpha if +1 else 1 - alpha)`` over cluster-constant ``sigma``.

    Args:
        measure: the edge measure ``phi``.
        alpha: strictly between 0 and 1.
        caps: enumeration caps.
    """
    graph = measure.graph
    weights = tuple(fuzzy_beta(alpha).values())
    _check_spin_size(graph.vertex_count, 2, 0, caps)
    prob = [Fraction(0)] * (1 << graph.vertex_count)
    for edge_rank, phi in enumerate(measure.prob):
        if phi == 0:
            continue
        partition = graph_mod.component_partition(graph, edge_rank)
        for rank, val in _block_colorings(partition, weights, {}):
            prob[rank] += phi * val
    return SpinMeasure(vertex_count=graph.vertex_count, colors=PLUS_MINUS, prob=prob)


def joint_fuzzy_potts(
    measure: edge_measure.EdgeMeasure, alpha: Union[Fraction, int, str], *, caps: config.Caps = config.DEFAULT_CAPS
) -> JointMeasure:
    """
    ``Pr(eta, sigma) = phi(eta) alpha^(#+1 clusters) (1 - alpha)^(#-1 clusters)`` for cluster-constant ``sigma``.
    """
    graph = measure.graph
    weights = tuple(fuzzy_beta(alpha).values())
    _check_spin_size(graph.vertex_count, 2, graph.edge_count, caps)
    entries: List[JointEntry] = []
    for edge_rank, phi in enumerate(measure.prob):
        if phi == 0:
            continue
        partition = graph_mod.component_partition(graph, edge_rank)
        row = sorted(_block_colorings(partition, weights, {}))
        entries.extend((edge_rank, rank, phi * val) for rank, val in row)
    _LOGGER.debug("Joint measure on %s with %d nonzero entries", graph, len(entries))
    return JointMeasure(graph=graph, colors=PLUS_MINUS, entries=entries)


def partition_measure_from_edge_measure(measure: edge_measure.EdgeMeasure) -> PartitionMeasure:
    """Push-forward of ``phi`` through the cluster partition."""
    masses: Dict[graph_mod.Partition, Fraction] = {}
    for edge_rank, phi in enumerate(measure.prob):
        if phi == 0:
            continue
        partition = graph_mod.component_partition(measure.graph, edge_rank)
        masses[partition] = masses.get(partition, Fraction(0)) + phi
    return PartitionMeasure(vertex_count=measure.graph.vertex_count, entries=sorted(masses.items()))


def divide_and_color(
    partitions: PartitionMeasure,
    beta: Mapping[int, Union[Fraction, int, str]],
    *,
    caps: config.Caps = config.DEFAULT_CAPS,
) -> SpinMeasure:
    """
    Draw a partition, then color its blocks independently from ``beta``.

    Args:
        partitions: law of the partition.
        beta: ``color -> probability``; its iteration order is the color order of the result.
        caps: enumeration caps.
    """
    colors, weights = _validated_beta(beta)
    _check_spin_size(partitions.vertex_count, len(colors), 0, caps)
    prob = [Fraction(0)] * len(colors) ** partitions.vertex_count
    for partition, mass in partitions.entries:
        for rank, val in _block_colorings(partition, weights, {}):
            prob[rank] += mass * val
    return SpinMeasure(vertex_count=partitions.vertex_count, colors=colors, prob=prob)


def potts_gibbs(
    graph: graph_mod.Graph,
    p: edge_measure.EdgeParameters,
    q: int,
    *,
    caps: config.Caps = config.DEFAULT_CAPS,
) -> SpinMeasure:
    """
    ``Pr(sigma) ~ prod_e w_e^[sigma_u = sigma_v]`` with ``w_e = 1 / (1 - p_e)`` over colors ``0..q-1``.

    Couplings are given through ``p_e`` so the weights stay rational.

    Args:
        graph: the multigraph.
        p: edge parameters in ``(0, 1)``.
        q: number of colors, integer at least 2.
        caps: enumeration caps.
    """
    if isinstance(q, Fraction):
        if q.denominator != 1:
            raise ValueError(f"Argument 'q' must be an integer number of colors. Got: '{q}'")
        q = int(q)
    q = preprocess.integer(q, "q", lower_bound=2)  # type: ignore
    if graph.vertex_count < 1:
        raise ValueError(f"Measures need at least one vertex. Got: {graph}")
    params = edge_measure.edge_parameters(graph, p)
    gibbs_weights = [1 / (1 - p_e) for p_e in params]
    _check_spin_size(graph.vertex_count, q, 0, caps)
    colors = tuple(range(q))
    weights = []
    for spins in itertools.product(range(q), repeat=graph.vertex_count):
        weight = Fraction(1)
        for ndx, (endpoint_a, endpoint_b) in enumerate(graph.edges):
            if spins[endpoint_a] == spins[endpoint_b]:
                weight *= gibbs_weights[ndx]
        weights.append((spin_rank(colors, spins), weight))
    total = sum((weight for _, weight in weights), Fraction(0))
    prob = [Fraction(0)] * q**graph.vertex_count
    for rank, weight in weights:
        prob[rank] = weight / total
    return SpinMeasure(vertex_count=graph.vertex_count, colors=colors, prob=prob)


def condition_spin(
    measure: Union[SpinMeasure, JointMeasure], vertex: int, color: int
) -> Union[SpinMeasure, JointMeasure]:
    """
    Conditional law given ``sigma_vertex = color``, of the same kind as ``measure``.

    Raises:
        error.PreconditionError: the event is null.
    """
    preprocess.integer(vertex, "vertex", lower_bound=0, upper_bound=measure.vertex_count - 1)
    if color not in measure.colors:
        raise ValueError(f"Argument 'color' must be one of {measure.colors}. Got: '{color}'")
    size = len(measure.colors)
    color_index = measure.colors.index(color)

    def matches(rank: int) -> bool:
        return rank // size**vertex % size == color_index

    if isinstance(measure, JointMeasure):
        kept = [(edge_rank, rank, val) for edge_rank, rank, val in measure.entries if matches(rank)]
        mass = sum((val for _, _, val in kept), Fraction(0))
        if mass == 0:
            raise error.PreconditionError(f"Cannot condition on null event sigma[{vertex}] = {color}")
        return JointMeasure(
            graph=measure.graph, colors=measure.colors, entries=[(e, r, val / mass) for e, r, val in kept]
        )
    preprocess.validate_type(measure, "measure", SpinMeasure)
    mass = sum((val for rank, val in enumerate(measure.prob) if matches(rank)), Fraction(0))
    if mass == 0:
        raise error.PreconditionError(f"Cannot condition on null event sigma[{vertex}] = {color}")
    prob = [val / mass if matches(rank) else Fraction(0) for rank, val in enumerate(measure.prob)]
    return SpinMeasure(vertex_count=measure.vertex_count, colors=measure.colors, prob=prob)


def flip(measure: SpinMeasure) -> SpinMeasure:
    """Global ``sigma -> -sigma`` for two-color measures."""
    measure.require_plus_minus()
    full = (1 << measure.vertex_count) - 1
    prob = [measure.prob[rank ^ full] for rank in range(len(measure.prob))]
    return SpinMeasure(vertex_count=measure.vertex_count, colors=measure.colors, prob=prob)


def restrict_spin(measure: SpinMeasure, vertices: Sequence[int]) -> SpinMeasure:
    """
    Marginal law of ``(sigma_v)`` for ``v`` in ``vertices``; vertex ``vertices[i]`` becomes vertex ``i``.

    Up-sets of the marginal are up-sets of ``measure`` that ignore the other vertices.
    """
    preprocess.validate_type(measure, "measure", SpinMeasure)
    for vertex in vertices:
        preprocess.integer(vertex, "vertices", lower_bound=0, upper_bound=measure.vertex_count - 1)
    kept = list(vertices)
    if not kept or len(set(kept)) != len(kept):
        raise ValueError(f"Argument 'vertices' must be non-empty and without repetitions. Got: {vertices}")
    size = len(measure.colors)
    prob = [Fraction(0)] * size ** len(kept)
    for rank, val in enumerate(measure.prob):
        digits = [rank // size**vertex % size for vertex in kept]
        prob[sum(digit * size**ndx for ndx, digit in enumerate(digits))] += val
    return SpinMeasure(vertex_count=len(kept), colors=measure.colors, prob=prob)


def plc_check_spin(measure: SpinMeasure) -> verdict.Verdict:
    """Lattice condition on ``{-1, +1}^V`` with the product order."""
    measure.require_plus_minus()
    return lattice.lattice_condition(measure.prob, check="plc_spin")
