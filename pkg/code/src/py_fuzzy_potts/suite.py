# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""
Acceptance suite over the default corpus. Each criterion is exhaustive and exact; the light mode trims
the parameter grids so the whole suite runs in well under a minute.
"""
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import attrs

from py_fuzzy_potts import association, coupling, edge_measure, explorer
from py_fuzzy_potts import graph as graph_mod
from py_fuzzy_potts import spin_measure
from py_fuzzy_potts.common import config, const, dto_defaults, error, logger

_LOGGER = logger.get(__name__)

FULL_Q: Tuple[Fraction, ...] = (Fraction(1), Fraction(3, 2), Fraction(2), Fraction(4))
FULL_P: Tuple[Fraction, ...] = (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))
FULL_ALPHA: Tuple[Fraction, ...] = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
LIGHT_Q: Tuple[Fraction, ...] = (Fraction(1), Fraction(2))
LIGHT_P: Tuple[Fraction, ...] = (Fraction(1, 2),)
LIGHT_ALPHA: Tuple[Fraction, ...] = (Fraction(1, 2),)
COUPLING_Q: Tuple[Fraction, ...] = (Fraction(1), Fraction(2))
ES_Q: Tuple[int, ...] = (2, 3)
DEDEKIND: Dict[int, int] = {2: 6, 3: 20, 4: 168}
HALF: Fraction = Fraction(1, 2)


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class CriterionResult(dto_defaults.HasFromJsonString):
    """Outcome of one acceptance criterion."""

    criterion: int = attrs.field()
    name: str = attrs.field()
    holds: bool = attrs.field()
    checked: int = attrs.field(default=0)
    """
    Instances examined (graphs, cells, leaves; depends on the criterion).
    """
    details: Optional[Dict[str, Any]] = attrs.field(default=None)


class _Context:
    def __init__(self, corpus: Sequence[graph_mod.Graph], full: bool, caps: config.Caps, workers: int):
        self.corpus = list(corpus)
        self.full = full
        self.caps = caps
        self.workers = workers

    @property
    def q_values(self) -> Tuple[Fraction, ...]:
        return FULL_Q if self.full else LIGHT_Q

    @property
    def p_values(self) -> Tuple[Fraction, ...]:
        return FULL_P if self.full else LIGHT_P

    @property
    def alpha_values(self) -> Tuple[Fraction, ...]:
        return FULL_ALPHA if self.full else LIGHT_ALPHA


def _theorem1(ctx: _Context) -> CriterionResult:
    sweep = explorer.association_sweep(
        ctx.corpus, ctx.q_values, ctx.p_values, ctx.alpha_values, caps=ctx.caps, workers=ctx.workers
    )
    details: Dict[str, Any] = {"violations": sweep.violations}
    failing = next((cell for cell in sweep.cells if not cell.result), None)
    if failing is not None:
        details["first_failure"] = failing.as_dict(for_json=True)
    return CriterionResult(
        criterion=1,
        name="positive_association_q_ge_1",
        holds=sweep.violations == 0,
        checked=len(sweep.cells),
        details=details,
    )


def _plc(ctx: _Context) -> CriterionResult:
    checked = 0
    for graph in ctx.corpus:
        for q in ctx.q_values:
            for p in ctx.p_values:
                checked += 1
                result = edge_measure.plc_check(edge_measure.random_cluster(graph, p, q, caps=ctx.caps))
                if not result:
                    return CriterionResult(
                        criterion=2,
                        name="plc_random_cluster",
                        holds=False,
                        checked=checked,
                        details={"graph": explorer.graph_dict(graph), "q": q, "p": p},
                    )
    triangle = graph_mod.complete_graph(3)
    below_one = edge_measure.plc_check(edge_measure.random_cluster(triangle, HALF, HALF, caps=ctx.caps))
    return CriterionResult(
        criterion=2,
        name="plc_random_cluster",
        holds=not below_one,
        checked=checked + 1,
        details={"triangle_q_half_witness": below_one.witness},
    )


def _conditional_identity(ctx: _Context) -> CriterionResult:
    checked = 0
    for graph in ctx.corpus:
        measure = edge_measure.random_cluster(graph, HALF, 2, caps=ctx.caps)
        for edge in range(graph.edge_count):
            for value in (0, 1):
                checked += 1
                conditioned, _ = edge_measure.condition_on_edge(measure, edge, value)
                minor = conditioned.graph
                if conditioned != edge_measure.random_cluster(minor, HALF, 2, caps=ctx.caps):
                    return CriterionResult(
                        criterion=3,
                        name="conditional_minor_identity",
                        holds=False,
                        checked=checked,
                        details={"graph": explorer.graph_dict(graph), "edge": edge, "value": value},
                    )
    return CriterionResult(criterion=3, name="conditional_minor_identity", holds=True, checked=checked)


def _coupling_events(vertex_count: int, full: bool, caps: config.Caps) -> List[association.UpSet]:
    if full:
        return association.enumerate_upsets(vertex_count, caps=caps)
    return association.principal_upsets(vertex_count)


def _coupling(ctx: _Context) -> CriterionResult:
    checked = 0
    for graph in ctx.corpus:
        events = _coupling_events(graph.vertex_count, ctx.full, ctx.caps)
        for q in COUPLING_Q if ctx.full else COUPLING_Q[1:]:
            for edge, endpoints in enumerate(graph.edges):
                for vertex in sorted(set(endpoints)):
                    built = coupling.build_coupling(graph, HALF, q, edge, vertex, caps=ctx.caps)
                    report = coupling.verify_coupling(built, graph, HALF, q, caps=ctx.caps)
                    checked += 1
                    failed = [item.as_dict(for_json=True) for item in report.verdicts() if not item]
                    for event in events:
                        result = coupling.lemma2_conclusion_via_coupling(built, HALF, event, caps=ctx.caps)
                        if not result:
                            failed.append(result.as_dict(for_json=True))
                            break
                    if failed:
                        return CriterionResult(
                            criterion=4,
                            name="coupling",
                            holds=False,
                            checked=checked,
                            details={
                                "graph": explorer.graph_dict(graph),
                                "q": q,
                                "edge": edge,
                                "vertex": vertex,
                                "failed": failed,
                            },
                        )
    return CriterionResult(criterion=4, name="coupling", holds=True, checked=checked)


def _figure1(ctx: _Context) -> CriterionResult:
    analyses = [explorer.figure1_analysis(m, caps=ctx.caps) for m in range(1, explorer.FIGURE1_BRUTE_FORCE_MAX_M + 1)]
    signs = [analysis.sign for analysis in analyses]
    return CriterionResult(
        criterion=5,
        name="figure1_threshold",
        holds=signs == [1, 1, 1, 1, 1, 0, -1],
        checked=len(analyses),
        details={"signs": signs},
    )


def _lemma2_failure(ctx: _Context) -> CriterionResult:
    demo = explorer.lemma2_failure_demo(7, Fraction(1, 100), caps=ctx.caps)
    return CriterionResult(
        criterion=6,
        name="lemma2_failure",
        holds=demo.covariance < 0,
        checked=1,
        details={"covariance": demo.covariance},
    )


def _edwards_sokal(ctx: _Context) -> CriterionResult:
    checked = 0
    for graph in (graph_mod.complete_graph(3), graph_mod.path_graph(3)):
        for q in ES_Q:
            checked += 1
            if not es_check(graph, HALF, q, caps=ctx.caps)["equal"]:
                return CriterionResult(
                    criterion=7,
                    name="edwards_sokal",
                    holds=False,
                    checked=checked,
                    details={"graph": explorer.graph_dict(graph), "q": q},
                )
    return CriterionResult(criterion=7, name="edwards_sokal", holds=True, checked=checked)


def _boundary(ctx: _Context) -> CriterionResult:
    try:
        scan = explorer.haggstrom_boundary_scan(ctx.corpus, caps=ctx.caps)
    except error.VerificationError as err:
        return CriterionResult(criterion=8, name="haggstrom_boundary", holds=False, details={"error": str(err)})
    return CriterionResult(criterion=8, name="haggstrom_boundary", holds=True, checked=len(scan.cells))


def _dedekind(ctx: _Context) -> CriterionResult:
    counts = {size: len(association.enumerate_upsets(size, caps=ctx.caps)) for size in DEDEKIND}
    return CriterionResult(
        criterion=9, name="upset_counts", holds=counts == DEDEKIND, checked=len(counts), details={"counts": counts}
    )


CRITERIA: Tuple[Callable[[_Context], CriterionResult], ...] = (
    _theorem1,
    _plc,
    _conditional_identity,
    _coupling,
    _figure1,
    _lemma2_failure,
    _edwards_sokal,
    _boundary,
    _dedekind,
)


def es_check(
    graph: graph_mod.Graph, p: edge_measure.EdgeParameters, q: int, *, caps: config.Caps = config.DEFAULT_CAPS
) -> Dict[str, Any]:
    """
    Potts Gibbs measure against divide and color of the random cluster partition with uniform colors.

    Returns:
        ``{"q", "equal", "max_difference"}``
    """
    gibbs = spin_measure.potts_gibbs(graph, p, q, caps=caps)
    partitions = spin_measure.partition_measure_from_edge_measure(edge_measure.random_cluster(graph, p, q, caps=caps))
    colored = spin_measure.divide_and_color(partitions, {color: Fraction(1, q) for color in range(q)}, caps=caps)
    difference = max(abs(val_a - val_b) for val_a, val_b in zip(gibbs.prob, colored.prob))
    return {"q": q, "equal": gibbs == colored, "max_difference": difference}


def run_suite(
    corpus: Optional[Sequence[graph_mod.Graph]] = None,
    *,
    full: bool = False,
    caps: config.Caps = config.DEFAULT_CAPS,
    workers: int = 1,
) -> List[CriterionResult]:
    """
    All criteria in order. Defaults to :py:func:`explorer.default_corpus`.
    """
    ctx = _Context(explorer.default_corpus() if corpus is None else corpus, full, caps, workers)
    results = []
    for criterion in CRITERIA:
        result = criterion(ctx)
        _LOGGER.debug("Criterion %d (%s): %s", result.criterion, result.name, result.holds)
        if not result.holds:
            _LOGGER.warning("Acceptance criterion %d (%s) fails: %s", result.criterion, result.name, result.details)
        results.append(result)
    return results
