# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""
Edge-by-edge coupling of ``phi(. | eta_e = 1)`` (``psi``) and ``phi(. | eta_e = 0)`` (``xi``).

Edge ``e`` is fixed first. Each later edge ``f`` is decided by one uniform variable ``X_f``:
``psi_f = 1`` iff ``X_f < t_psi`` and ``xi_f = 1`` iff ``X_f < t_xi``, the thresholds being the conditional
open probabilities of ``f`` given what each side has decided so far. The exact expansion integrates
``X_f`` out, so every branch point has at most three children.
"""
import random
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import attrs

from py_fuzzy_potts import association, edge_measure
from py_fuzzy_potts import graph as graph_mod
from py_fuzzy_potts import lattice, spin_measure
from py_fuzzy_potts.common import config, const, dto_defaults, error, exact, logger, preprocess
from py_fuzzy_potts.dto import verdict

_LOGGER = logger.get(__name__)
_SAMPLER_RESOLUTION_BITS: int = 53


class EdgeRule(dto_defaults.EnumWithFromStrIgnoreCase):
    """Which unvisited edge touching the ``psi`` component of ``x`` is decided next."""

    LOWEST_INCIDENT = "lowest_incident"
    HIGHEST_INCIDENT = "highest_incident"


@attrs.define(**const.ATTRS_DEFAULTS)  # type: ignore
class CouplingLeaf:
    """One outcome of the expansion."""

    psi: int = attrs.field(validator=attrs.validators.instance_of(int))
    xi: int = attrs.field(validator=attrs.validators.instance_of(int))
    prob: Fraction = attrs.field(validator=attrs.validators.instance_of(Fraction))
    order: Tuple[int, ...] = attrs.field(converter=tuple)
    """
    Edges in the order they were decided on this branch, ``e`` first.
    """


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class CouplingDistribution:
    """
    Exact joint law of ``(psi, xi)``; leaves in lexicographic order of branch choices
    (both open, ``psi`` only, ``xi`` only, both closed).
    """

    measure: edge_measure.EdgeMeasure = attrs.field(
        validator=attrs.validators.instance_of(edge_measure.EdgeMeasure)
    )
    x: int = attrs.field(validator=attrs.validators.instance_of(int))
    e: int = attrs.field(validator=attrs.validators.instance_of(int))
    rule: EdgeRule = attrs.field(validator=attrs.validators.instance_of(EdgeRule))
    leaves: Tuple[CouplingLeaf, ...] = attrs.field(converter=tuple)
    domination_guaranteed: bool = attrs.field(validator=attrs.validators.instance_of(bool))
    """
    :py:obj:`False` for ``q < 1``, where ``psi >= xi`` may fail.
    """
    threshold_inversions: int = attrs.field(default=0)
    """
    Branch points where ``t_psi < t_xi``.
    """

    @leaves.validator
    def _leaves_validator(self, attribute: attrs.Attribute, value: Tuple[CouplingLeaf, ...]) -> None:
        total = sum((leaf.prob for leaf in value), Fraction(0))
        if total != 1:
            raise ValueError(f"Argument '{attribute.name}' must have probabilities summing to 1. Got: {total}")
        for ndx, leaf in enumerate(value):
            if not (leaf.psi >> self.e & 1) or leaf.xi >> self.e & 1:
                raise ValueError(f"Leaf {ndx} does not have psi_e = 1 and xi_e = 0. Got: {leaf}")

    @property
    def graph(self) -> graph_mod.Graph:
        """The multigraph."""
        return self.measure.graph

    @property
    def edge_open_probability(self) -> Fraction:
        """``phi(eta_e = 1)``"""
        return edge_measure.marginal(self.measure, self.e)

    def as_report(self) -> Dict[str, Any]:
        """JSON-ready summary: leaves as ``[psi, xi, probability]`` triples."""
        return {
            "x": self.x,
            "e": self.e,
            "rule": self.rule.value,
            "domination_guaranteed": self.domination_guaranteed,
            "threshold_inversions": self.threshold_inversions,
            "leaves": [[leaf.psi, leaf.xi, exact.render(leaf.prob)] for leaf in self.leaves],
        }


@attrs.define(**const.ATTRS_DEFAULTS)  # type: ignore
class CouplingReport:
    """Outcome of :py:func:`verify_coupling`, one verdict per guarantee."""

    marginals: verdict.Verdict = attrs.field()
    domination: verdict.Verdict = attrs.field()
    agreement_off_component: verdict.Verdict = attrs.field()
    component_refinement: verdict.Verdict = attrs.field()

    @property
    def holds(self) -> bool:
        """All four hold."""
        return all(self.verdicts())

    def verdicts(self) -> Tuple[verdict.Verdict, ...]:
        """In check order."""
        return self.marginals, self.domination, self.agreement_off_component, self.component_refinement


class _Process:
    """The sequential construction shared by the exact expansion and the sampler."""

    def __init__(self, measure: edge_measure.EdgeMeasure, x: int, e: int, rule: EdgeRule):
        self.graph = measure.graph
        self.x = x
        self.e = e
        self.rule = rule
        self.oracle = edge_measure.ConditionalOracle(measure)

    def next_edge(self, visited: int, psi: int) -> Optional[int]:
        """Next edge to decide, :py:obj:`None` when all are decided."""
        remaining = [ndx for ndx in range(self.graph.edge_count) if not visited >> ndx & 1]
        if not remaining:
            return None
        component = set(graph_mod.component_of(self.graph, psi & visited, self.x))
        touching = [ndx for ndx in remaining if component.intersection(self.graph.edges[ndx])]
        if touching:
            return touching[0] if self.rule is EdgeRule.LOWEST_INCIDENT else touching[-1]
        return remaining[0]

    def thresholds(self, visited: int, psi: int, xi: int, edge: int) -> Tuple[Fraction, Fraction]:
        """``(t_psi, t_xi)``"""
        return (
            self.oracle.open_probability(visited, psi, edge),
            self.oracle.open_probability(visited, xi, edge),
        )


def _check_designation(graph: graph_mod.Graph, e: int, x: int) -> None:
    graph.check_edge(e)
    graph.check_vertex(x)
    if not graph.is_incident(e, x):
        raise error.PreconditionError(f"Vertex {x} is not an endpoint of edge {e}={graph.edges[e]}")


def _branches(t_psi: Fraction, t_xi: Fraction) -> List[Tuple[int, int, Fraction]]:
    """``(psi_f, xi_f, probability)`` with zero branches dropped."""
    candidates = [
        (1, 1, min(t_psi, t_xi)),
        (1, 0, max(Fraction(0), t_psi - t_xi)),
        (0, 1, max(Fraction(0), t_xi - t_psi)),
        (0, 0, 1 - max(t_psi, t_xi)),
    ]
    return [branch for branch in candidates if branch[2] > 0]


def build_coupling(
    graph: graph_mod.Graph,
    p: edge_measure.EdgeParameters,
    q: Any,
    e: int,
    x: int,
    *,
    rule: EdgeRule = EdgeRule.LOWEST_INCIDENT,
    caps: config.Caps = config.DEFAULT_CAPS,
) -> CouplingDistribution:
    """
    Exact expansion of the coupling for the random cluster measure ``phi_{p,q}`` on ``graph``.

    Args:
        graph: the multigraph.
        p: edge parameters.
        q: cluster weight; below 1 the construction runs but domination is not guaranteed.
        e: the conditioned edge.
        x: an endpoint of ``e``.
        rule: next-edge rule.
        caps: enumeration caps.

    Raises:
        error.PreconditionError: ``x`` is not an endpoint of ``e``.
    """
    _check_designation(graph, e, x)
    rule = preprocess.validate_type(rule, "rule", EdgeRule)  # type: ignore
    measure = edge_measure.random_cluster(graph, p, q, caps=caps)
    q = preprocess.rational(q, "q")
    process = _Process(measure, x, e, rule)
    leaves: List[CouplingLeaf] = []
    inversions = 0

    def expand(visited: int, psi: int, xi: int, prob: Fraction, order: Tuple[int, ...]) -> None:
        nonlocal inversions
        edge = process.next_edge(visited, psi)
        if edge is None:
            leaves.append(CouplingLeaf(psi=psi, xi=xi, prob=prob, order=order))
            return
        t_psi, t_xi = process.thresholds(visited, psi, xi, edge)
        if t_psi < t_xi:
            inversions += 1
        for psi_f, xi_f, branch_prob in _branches(t_psi, t_xi):
            expand(
                visited | 1 << edge,
                psi | psi_f << edge,
                xi | xi_f << edge,
                prob * branch_prob,
                order + (edge,),
            )

    expand(1 << e, 1 << e, 0, Fraction(1), (e,))
    _LOGGER.debug("Coupling on %s, e=%d, x=%d: %d leaves, %d inversions", graph, e, x, len(leaves), inversions)
    return CouplingDistribution(
        measure=measure,
        x=x,
        e=e,
        rule=rule,
        leaves=leaves,
        domination_guaranteed=q >= 1,
        threshold_inversions=inversions,
    )


def _marginal_check(coupling: CouplingDistribution, measure: edge_measure.EdgeMeasure) -> verdict.Verdict:
    checked = 0
    for side, value in (("psi", 1), ("xi", 0)):
        expected, _ = edge_measure.condition_on_edge(measure, coupling.e, value)
        coupled = [Fraction(0)] * expected.graph.config_count
        for leaf in coupling.leaves:
            coupled[graph_mod.drop_bit(leaf.psi if value else leaf.xi, coupling.e)] += leaf.prob
        for rank, (got, want) in enumerate(zip(coupled, expected.prob)):
            checked += 1
            if got != want:
                return verdict.Verdict(
                    check="coupling_marginals",
                    holds=False,
                    checked=checked,
                    witness={"side": side, "minor_rank": rank, "coupled": got, "conditional": want},
                )
    return verdict.Verdict(check="coupling_marginals", holds=True, checked=checked)


def _leaf_check(coupling: CouplingDistribution, check: str, leaf_holds: Any) -> verdict.Verdict:
    for ndx, leaf in enumerate(coupling.leaves):
        if not leaf_holds(leaf):
            return verdict.Verdict(
                check=check, holds=False, checked=ndx + 1, witness={"leaf": ndx, "psi": leaf.psi, "xi": leaf.xi}
            )
    return verdict.Verdict(check=check, holds=True, checked=len(coupling.leaves))


def verify_coupling(
    coupling: CouplingDistribution,
    graph: graph_mod.Graph,
    p: edge_measure.EdgeParameters,
    q: Any,
    *,
    caps: config.Caps = config.DEFAULT_CAPS,
) -> CouplingReport:
    """
    Checks, against a freshly built ``phi_{p,q}``:

    1. ``psi`` has law ``phi(. | eta_e = 1)`` and ``xi`` has law ``phi(. | eta_e = 0)``, compared on the minors;
    2. ``psi >= xi`` on every leaf;
    3. on every leaf, ``psi`` and ``xi`` agree on every edge not contained in ``S``, the vertex set of the
       ``psi`` component of ``x``;
    4. every ``xi`` component is a ``psi`` component or lies inside ``S``.

    Failures name the first failing leaf; for ``q < 1`` they are reported, not raised.
    """
    measure = edge_measure.random_cluster(graph, p, q, caps=caps)
    if measure != coupling.measure:
        raise ValueError(f"Coupling was not built from the random cluster measure with p={p}, q={q} on {graph}")

    def agrees_off_component(leaf: CouplingLeaf) -> bool:
        inside = set(graph_mod.component_of(graph, leaf.psi, coupling.x))
        return all(
            leaf.psi >> ndx & 1 == leaf.xi >> ndx & 1
            for ndx, edge in enumerate(graph.edges)
            if not inside.issuperset(edge)
        )

    def refines(leaf: CouplingLeaf) -> bool:
        inside = set(graph_mod.component_of(graph, leaf.psi, coupling.x))
        psi_blocks = set(graph_mod.component_partition(graph, leaf.psi))
        return all(
            block in psi_blocks or inside.issuperset(block)
            for block in graph_mod.component_partition(graph, leaf.xi)
        )

    report = CouplingReport(
        marginals=_marginal_check(coupling, measure),
        domination=_leaf_check(coupling, "coupling_domination", lambda leaf: lattice.is_below(leaf.xi, leaf.psi)),
        agreement_off_component=_leaf_check(coupling, "coupling_agreement", agrees_off_component),
        component_refinement=_leaf_check(coupling, "coupling_refinement", refines),
    )
    if not report.holds:
        log = _LOGGER.warning if coupling.domination_guaranteed else _LOGGER.info
        log("Coupling guarantees fail on %s: %s", graph, [item.check for item in report.verdicts() if not item])
    return report


class CouplingSampler:
    """
    Draws ``(psi, xi)`` by simulating ``X_f`` with :py:class:`random.Random`.

    ``X_f`` is a dyadic rational with :py:data:`_SAMPLER_RESOLUTION_BITS` bits, compared exactly against the
    thresholds.
    """

    def __init__(
        self,
        graph: graph_mod.Graph,
        p: edge_measure.EdgeParameters,
        q: Any,
        e: int,
        x: int,
        *,
        rule: EdgeRule = EdgeRule.LOWEST_INCIDENT,
        caps: config.Caps = config.DEFAULT_CAPS,
    ):
        _check_designation(graph, e, x)
        self._process = _Process(edge_measure.random_cluster(graph, p, q, caps=caps), x, e, rule)

    def sample(self, rng: random.Random) -> Tuple[int, int]:
        """One draw."""
        process = self._process
        visited = psi = 1 << process.e
        xi = 0
        edge = process.next_edge(visited, psi)
        while edge is not None:
            t_psi, t_xi = process.thresholds(visited, psi, xi, edge)
            uniform = Fraction(rng.getrandbits(_SAMPLER_RESOLUTION_BITS), 1 << _SAMPLER_RESOLUTION_BITS)
            psi |= (uniform < t_psi) << edge
            xi |= (uniform < t_xi) << edge
            visited |= 1 << edge
            edge = process.next_edge(visited, psi)
        return psi, xi

    def sample_many(self, count: int, seed: int) -> List[Tuple[int, int]]:
        """``count`` draws from one generator seeded with ``seed``."""
        preprocess.integer(count, "count", lower_bound=0)
        rng = random.Random(seed)
        return [self.sample(rng) for _ in range(count)]


def sample_coupling(
    graph: graph_mod.Graph,
    p: edge_measure.EdgeParameters,
    q: Any,
    e: int,
    x: int,
    seed: int,
    *,
    rule: EdgeRule = EdgeRule.LOWEST_INCIDENT,
    caps: config.Caps = config.DEFAULT_CAPS,
) -> Tuple[int, int]:
    """Single reproducible draw of ``(psi, xi)``."""
    return CouplingSampler(graph, p, q, e, x, rule=rule, caps=caps).sample(random.Random(seed))


def coupling_leaf_spin_probability(
    graph: graph_mod.Graph, config_rank: int, x: int, alpha: Any, event_c: association.UpSet
) -> Fraction:
    """``Pr(C | eta = config_rank, sigma_x = 1)``: clusters colored independently, the ``x`` cluster forced to +1."""
    graph.check_vertex(x)
    if event_c.coordinate_count != graph.vertex_count:
        raise ValueError(f"Event lives on {event_c.coordinate_count} coordinates, graph has {graph.vertex_count}")
    alpha = preprocess.probability_open(alpha, "alpha")
    return spin_measure.cluster_coloring_probability(graph, config_rank, alpha, event_c.mask, forced_plus=(x,))


def lemma2_conclusion_via_coupling(
    coupling: CouplingDistribution,
    alpha: Any,
    event_c: association.UpSet,
    *,
    caps: config.Caps = config.DEFAULT_CAPS,
) -> verdict.Verdict:
    """
    Per leaf, ``Pr(C | psi, sigma_x = 1) >= Pr(C | xi, sigma_x = 1)``. The leaves then give

    ``Cov(1_C, 1_{eta_e = 1} | sigma_x = 1) = phi_e (1 - phi_e) sum_leaves prob (Pr(C | psi) - Pr(C | xi))``

    which is compared with the covariance computed from the joint measure.

    Raises:
        error.VerificationError: the two covariances differ.
    """
    graph = coupling.graph
    alpha = preprocess.probability_open(alpha, "alpha")
    total = Fraction(0)
    for ndx, leaf in enumerate(coupling.leaves):
        given_psi = coupling_leaf_spin_probability(graph, leaf.psi, coupling.x, alpha, event_c)
        given_xi = coupling_leaf_spin_probability(graph, leaf.xi, coupling.x, alpha, event_c)
        if given_psi < given_xi:
            return verdict.Verdict(
                check="lemma2_coupling",
                holds=False,
                checked=ndx + 1,
                witness={"leaf": ndx, "given_psi": given_psi, "given_xi": given_xi},
            )
        total += leaf.prob * (given_psi - given_xi)
    open_prob = coupling.edge_open_probability
    aggregate = open_prob * (1 - open_prob) * total
    joint = spin_measure.joint_fuzzy_potts(coupling.measure, alpha, caps=caps)
    direct = association.lemma2_covariance(joint, coupling.x, coupling.e, event_c)
    if aggregate != direct:
        raise error.VerificationError(
            f"Covariance through the coupling ({aggregate}) differs from the joint measure ({direct})"
        )
    return verdict.Verdict(
        check="lemma2_coupling",
        holds=True,
        checked=len(coupling.leaves),
        details={"covariance": aggregate},
    )
