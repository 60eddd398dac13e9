# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""
Quantitative experiments around positive association: the uniform forest counterexample on the
two-terminal family, the conditional edge correlation failing for ``q < 1``, sweeps over ``q`` and ``alpha``,
and witnesses showing that neither the lattice condition nor cut independence alone is enough.
"""
import concurrent.futures
import itertools
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import attrs

from py_fuzzy_potts import association, edge_measure
from py_fuzzy_potts import graph as graph_mod
from py_fuzzy_potts import spin_measure
from py_fuzzy_potts.common import config, const, dto_defaults, error, logger, preprocess
from py_fuzzy_potts.dto import verdict

_LOGGER = logger.get(__name__)

FIGURE1_BRUTE_FORCE_MAX_M: int = 7
"""Largest ``m`` counted by enumeration (``2^15`` configurations)."""
DEFAULT_FOREST_LIMIT_Q: Tuple[Fraction, ...] = (Fraction(1, 10), Fraction(1, 100))
DEFAULT_PROBE_Q: Tuple[Fraction, ...] = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
DEFAULT_PROBE_P: Tuple[Fraction, ...] = (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))
DEFAULT_PROBE_ALPHA: Tuple[Fraction, ...] = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
DEFAULT_BOUNDARY_GRID: Tuple[Tuple[Fraction, Fraction], ...] = (
    (Fraction(4), Fraction(1, 2)),
    (Fraction(2), Fraction(1, 2)),
    (Fraction(2), Fraction(9, 10)),
    (Fraction(1), Fraction(1, 2)),
    (Fraction(3), Fraction(1, 3)),
)
INSUFFICIENCY_ALPHA: Fraction = Fraction(1, 2)


def graph_dict(graph: graph_mod.Graph) -> Dict[str, Any]:
    """JSON form of a graph."""
    return {"vertex_count": graph.vertex_count, "edges": [list(edge) for edge in graph.edges]}


def default_corpus() -> List[graph_mod.Graph]:
    """Connected simple graphs with at most 4 vertices and 6 edges, 10 of them."""
    return graph_mod.enumerate_connected_graphs(4, 6, min_vertices=1)


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class Figure1Analysis(dto_defaults.HasFromJsonString):
    """Uniform forest on the two-terminal family with ``m`` paths of length two."""

    m: int = attrs.field()
    forest_count: int = attrs.field()
    tree_count: int = attrs.field()
    forests_with_e: int = attrs.field()
    trees_with_e: int = attrs.field()
    pr_connected: Fraction = attrs.field()
    pr_e_open: Fraction = attrs.field()
    covariance: Fraction = attrs.field()
    sign: int = attrs.field()
    brute_force: bool = attrs.field()
    """
    Counts were also obtained by enumeration and matched the closed forms.
    """


def figure1_closed_form_counts(m: int) -> Tuple[int, int, int, int]:
    """``(forests, spanning trees, forests containing e, spanning trees containing e)``"""
    preprocess.integer(m, "m", lower_bound=1)
    return 2 * 3**m + m * 3 ** (m - 1), 2 ** (m - 1) * (m + 2), 3**m, 2**m


def figure1_covariance_closed_form(m: int) -> Fraction:
    """``6^(m-1) (6 - m) / N^2`` with ``N = 2 * 3^m + m * 3^(m-1)`` forests."""
    forests, _, _, _ = figure1_closed_form_counts(m)
    return Fraction(6 ** (m - 1) * (6 - m), forests * forests)


def _figure1_brute_counts(family: graph_mod.Figure1) -> Tuple[int, int, int, int]:
    graph = family.graph
    forests = trees = forests_e = trees_e = 0
    for rank in graph_mod.iter_configs(graph):
        if not graph_mod.is_forest(graph, rank):
            continue
        with_e = rank >> family.e & 1
        connected = graph_mod.is_connected(graph, rank)
        forests += 1
        forests_e += with_e
        trees += connected
        trees_e += connected and with_e
    return forests, trees, forests_e, trees_e


def figure1_analysis(
    m: int, *, brute_force: Optional[bool] = None, caps: config.Caps = config.DEFAULT_CAPS
) -> Figure1Analysis:
    """
    ``Pr(connected)``, ``Pr(eta_e = 1)`` and their covariance under the uniform forest measure.

    Args:
        m: number of two-edge paths, at least 1.
        brute_force: also enumerate; defaults to ``m <= FIGURE1_BRUTE_FORCE_MAX_M``.
        caps: enumeration caps, used when enumerating.

    Raises:
        error.VerificationError: enumeration disagrees with the closed forms.
    """
    m = preprocess.integer(m, "m", lower_bound=1)  # type: ignore
    counts = figure1_closed_form_counts(m)
    if brute_force is None:
        brute_force = m <= FIGURE1_BRUTE_FORCE_MAX_M
    if brute_force:
        family = graph_mod.figure1_graph(m)
        caps.check_edges(family.graph.edge_count, "two-terminal family enumeration")
        brute = _figure1_brute_counts(family)
        if brute != counts:
            raise error.VerificationError(f"Enumerated counts {brute} differ from closed forms {counts} at m={m}")
    forests, trees, forests_e, trees_e = counts
    pr_connected = Fraction(trees, forests)
    pr_e_open = Fraction(forests_e, forests)
    covariance = Fraction(trees_e, forests) - pr_connected * pr_e_open
    if covariance != figure1_covariance_closed_form(m):
        raise error.VerificationError(f"Covariance {covariance} differs from its closed form at m={m}")
    _LOGGER.debug("Two-terminal family m=%d: covariance %s", m, covariance)
    return Figure1Analysis(
        m=m,
        forest_count=forests,
        tree_count=trees,
        forests_with_e=forests_e,
        trees_with_e=trees_e,
        pr_connected=pr_connected,
        pr_e_open=pr_e_open,
        covariance=covariance,
        sign=_sign(covariance),
        brute_force=bool(brute_force),
    )


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class Lemma2FailureDemo(dto_defaults.HasFromJsonString):
    """Conditional correlation of ``{all spins +1}`` with ``{eta_e = 1}`` given ``sigma_x = +1``."""

    m: int = attrs.field()
    alpha: Fraction = attrs.field()
    covariance: Fraction = attrs.field()
    sign: int = attrs.field()
    pr_all_plus_given_x: Fraction = attrs.field()
    pr_connected: Fraction = attrs.field()
    bound_holds: bool = attrs.field()
    """
    ``|Pr(A | sigma_x = 1) - Pr(connected)| <= alpha``.
    """


def lemma2_failure_covariance_closed_form(m: int, alpha: Fraction) -> Fraction:
    """
    ``(2 + alpha)^(m-1) 3^(m-1) (6 - m + alpha m - 3 alpha - 3 alpha^2) / N^2``, ``N`` the forest count.
    """
    forests, _, _, _ = figure1_closed_form_counts(m)
    alpha = preprocess.probability_open(alpha, "alpha")
    factor = (6 - m + alpha * m - 3 * alpha - 3 * alpha * alpha) / (forests * forests)
    return (2 + alpha) ** (m - 1) * 3 ** (m - 1) * factor


def lemma2_failure_demo(m: int, alpha: Any, *, caps: config.Caps = config.DEFAULT_CAPS) -> Lemma2FailureDemo:
    """
    Joint measure of the uniform forest on the two-terminal family with fuzzy coloring ``alpha``.

    Raises:
        error.VerificationError: the enumerated covariance differs from the closed form.
    """
    m = preprocess.integer(m, "m", lower_bound=1)  # type: ignore
    alpha = preprocess.probability_open(alpha, "alpha")
    family = graph_mod.figure1_graph(m)
    forests = edge_measure.uniform_forest(family.graph, caps=caps)
    joint = spin_measure.joint_fuzzy_potts(forests, alpha, caps=caps)
    all_plus = association.UpSet.from_members(family.graph.vertex_count, [(1 << family.graph.vertex_count) - 1])
    covariance = association.lemma2_covariance(joint, family.x, family.e, all_plus)
    expected = lemma2_failure_covariance_closed_form(m, alpha)
    if covariance != expected:
        raise error.VerificationError(f"Covariance {covariance} differs from closed form {expected} at m={m}")
    plus_x = spin_measure.condition_spin(joint.spin_marginal(), family.x, 1)
    pr_all_plus = plus_x.prob[-1]  # type: ignore
    forest_count, trees, _, _ = figure1_closed_form_counts(m)
    pr_connected = Fraction(trees, forest_count)
    return Lemma2FailureDemo(
        m=m,
        alpha=alpha,
        covariance=covariance,
        sign=_sign(covariance),
        pr_all_plus_given_x=pr_all_plus,
        pr_connected=pr_connected,
        bound_holds=abs(pr_all_plus - pr_connected) <= alpha,
    )


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class ProbeCell(dto_defaults.HasFromJsonString):
    """One ``(graph, q, p, alpha)`` combination of a sweep."""

    graph: Dict[str, Any] = attrs.field()
    q: Fraction = attrs.field()
    p: Fraction = attrs.field()
    alpha: Fraction = attrs.field()
    result: verdict.Verdict = attrs.field()


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class ProbeReport(dto_defaults.HasFromJsonString):
    """Positive association of the fuzzy Potts measure over a grid, cells in grid order."""

    cells: List[ProbeCell] = attrs.field(factory=list)
    violations: int = attrs.field(default=0)


def _probe_cell(graph: graph_mod.Graph, q: Fraction, p: Fraction, alpha: Fraction, caps: config.Caps) -> ProbeCell:
    measure = edge_measure.random_cluster(graph, p, q, caps=caps)
    fuzzy = spin_measure.fuzzy_potts(measure, alpha, caps=caps)
    result = association.positive_association_check(fuzzy, caps=caps)
    return ProbeCell(graph=graph_dict(graph), q=q, p=p, alpha=alpha, result=result)


def _run_cells(tasks: List[Tuple[Any, ...]], workers: int) -> List[ProbeCell]:
    if workers <= 1:
        return [_probe_cell(*task) for task in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(_probe_cell, *task) for task in tasks]
        _ = concurrent.futures.wait(futures)
    return [future.result() for future in futures]


def _rationals(values: Sequence[Any], name: str) -> List[Fraction]:
    return [preprocess.rational(val, f"{name}[{ndx}]") for ndx, val in enumerate(values)]


def association_sweep(
    corpus: Sequence[graph_mod.Graph],
    q_values: Sequence[Any],
    p_values: Sequence[Any],
    alpha_values: Sequence[Any],
    *,
    caps: config.Caps = config.DEFAULT_CAPS,
    workers: int = 1,
) -> ProbeReport:
    """
    :py:func:`association.positive_association_check` on the fuzzy Potts measure of every
    ``(graph, q, p, alpha)`` cell, cells in that nesting order whatever ``workers`` is.
    """
    tasks = [
        (graph, q, p, alpha, caps)
        for graph in corpus
        for q in _rationals(q_values, "q_values")
        for p in _rationals(p_values, "p_values")
        for alpha in _rationals(alpha_values, "alpha_values")
    ]
    cells = _run_cells(tasks, preprocess.integer(workers, "workers", lower_bound=1))  # type: ignore
    return ProbeReport(cells=cells, violations=sum(1 for cell in cells if not cell.result))


def conjecture_probe_q_lt_1(
    corpus: Sequence[graph_mod.Graph],
    q_values: Sequence[Any] = DEFAULT_PROBE_Q,
    p_values: Sequence[Any] = DEFAULT_PROBE_P,
    alpha_values: Sequence[Any] = DEFAULT_PROBE_ALPHA,
    *,
    caps: config.Caps = config.DEFAULT_CAPS,
    workers: int = 1,
) -> ProbeReport:
    """
    :py:func:`association_sweep` restricted to ``0 < q < 1``, where positive association of ``nu`` is open.
    Nothing is asserted; violations are counted and logged at WARNING.
    """
    for ndx, val in enumerate(q_values):
        preprocess.probability_open(val, f"q_values[{ndx}]")
    result = association_sweep(corpus, q_values, p_values, alpha_values, caps=caps, workers=workers)
    if result.violations:
        _LOGGER.warning("Positive association fails in %d of %d probe cells", result.violations, len(result.cells))
    return result


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class BoundaryCell(dto_defaults.HasFromJsonString):
    """Lattice condition of the fuzzy Potts measure on every corpus graph for one ``(q, alpha)``."""

    q: Fraction = attrs.field()
    alpha: Fraction = attrs.field()
    condition_met: bool = attrs.field()
    """
    ``alpha q >= 1`` and ``(1 - alpha) q >= 1``.
    """
    plc_holds: List[bool] = attrs.field(factory=list)
    """
    One entry per corpus graph.
    """
    first_failure: Optional[Dict[str, Any]] = attrs.field(default=None)
    """
    Graph and witness of the first failing graph.
    """
    association_holds: Optional[bool] = attrs.field(default=None)
    """
    For ``q >= 1`` cells with a failure: positive association on the failing graph.
    """


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class BoundaryReport(dto_defaults.HasFromJsonString):
    """Cells in grid order."""

    p: Fraction = attrs.field()
    cells: List[BoundaryCell] = attrs.field(factory=list)


def haggstrom_boundary_scan(
    corpus: Sequence[graph_mod.Graph],
    grid: Sequence[Tuple[Any, Any]] = DEFAULT_BOUNDARY_GRID,
    *,
    p: Any = Fraction(1, 2),
    caps: config.Caps = config.DEFAULT_CAPS,
) -> BoundaryReport:
    """
    Lattice condition of ``nu`` for each ``(q, alpha)`` on every corpus graph.

    Raises:
        error.VerificationError: the condition ``alpha q >= 1, (1 - alpha) q >= 1`` holds and some graph fails,
            or it does not hold and no graph fails, or positive association fails for ``q >= 1``.
    """
    p = preprocess.probability_open(p, "p")
    cells = []
    for q_value, alpha_value in grid:
        q = preprocess.rational(q_value, "q", lower_bound=Fraction(0), lower_inclusive=False)
        alpha = preprocess.probability_open(alpha_value, "alpha")
        condition_met = alpha * q >= 1 and (1 - alpha) * q >= 1
        plc_holds = []
        first_failure = None
        association_holds = None
        for graph in corpus:
            fuzzy = spin_measure.fuzzy_potts(edge_measure.random_cluster(graph, p, q, caps=caps), alpha, caps=caps)
            result = spin_measure.plc_check_spin(fuzzy)
            plc_holds.append(result.holds)
            if not result and first_failure is None:
                first_failure = {"graph": graph_dict(graph), "witness": result.witness}
                if q >= 1:
                    association_holds = association.positive_association_check(fuzzy, caps=caps).holds
        if condition_met and first_failure is not None:
            raise error.VerificationError(f"Lattice condition fails at q={q}, alpha={alpha}: {first_failure}")
        if not condition_met and first_failure is None:
            raise error.VerificationError(f"No corpus graph fails the lattice condition at q={q}, alpha={alpha}")
        if association_holds is False:
            raise error.VerificationError(f"Positive association fails at q={q}, alpha={alpha}: {first_failure}")
        cells.append(
            BoundaryCell(
                q=q,
                alpha=alpha,
                condition_met=condition_met,
                plc_holds=plc_holds,
                first_failure=first_failure,
                association_holds=association_holds,
            )
        )
    return BoundaryReport(p=p, cells=cells)


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class InsufficiencyWitness(dto_defaults.HasFromJsonString):
    """An edge measure with one of the two properties, whose fuzzy Potts measure is not positively associated."""

    kind: str = attrs.field()
    """
    ``"plc_only"`` or ``"cut_independence_only"``.
    """
    graph: Dict[str, Any] = attrs.field()
    prob: List[Fraction] = attrs.field()
    alpha: Fraction = attrs.field()
    association_vertices: List[int] = attrs.field()
    """
    Vertices whose spins carry the failing up-sets; association is checked on their marginal.
    """
    plc: verdict.Verdict = attrs.field()
    cut_independence: verdict.Verdict = attrs.field()
    association: verdict.Verdict = attrs.field()


PLC_ONLY_GRAPH: graph_mod.Graph = graph_mod.Graph(vertex_count=4, edges=[(0, 1), (2, 3)])
PLC_ONLY_PROB: Tuple[Fraction, ...] = (Fraction(1, 3), Fraction(1, 6), Fraction(1, 6), Fraction(1, 3))
"""
Two disjoint edges that tend to be open together. The lattice condition holds, the empty cut between the
two edges is not independent, and ``{sigma_0 or sigma_1 = +1}`` is negatively correlated with
``{sigma_2 = sigma_3 = +1}``.
"""

CUT_ONLY_GRAPH: graph_mod.Graph = graph_mod.Graph(vertex_count=5, edges=[(4, 0), (4, 1), (4, 2), (4, 3)])
CUT_ONLY_PROB: Tuple[Fraction, ...] = tuple(
    Fraction(1, 2) if rank in (0b0011, 0b1100) else Fraction(0) for rank in range(16)
)
"""
A star with center 4: either leaves 0 and 1 or leaves 2 and 3 are joined to the center, never both.
Every measure on a star is cut independent. The lattice condition fails on the two supporting
configurations, and ``{sigma_0 = sigma_1 = +1}`` has covariance ``-alpha^2 (1 - alpha)^2 / 4``
with ``{sigma_2 = sigma_3 = +1}``.
"""
CUT_ONLY_LEAVES: Tuple[int, ...] = (0, 1, 2, 3)


def _insufficiency_witness(
    kind: str, graph: graph_mod.Graph, prob: Sequence[Fraction], vertices: Sequence[int], caps: config.Caps
) -> InsufficiencyWitness:
    measure = edge_measure.EdgeMeasure(graph=graph, prob=prob)
    fuzzy = spin_measure.fuzzy_potts(measure, INSUFFICIENCY_ALPHA, caps=caps)
    return InsufficiencyWitness(
        kind=kind,
        graph=graph_dict(graph),
        prob=list(prob),
        alpha=INSUFFICIENCY_ALPHA,
        association_vertices=list(vertices),
        plc=edge_measure.plc_check(measure),
        cut_independence=edge_measure.cut_independence_check(measure),
        association=association.positive_association_check(
            spin_measure.restrict_spin(fuzzy, vertices), caps=caps
        ),
    )


def single_property_insufficiency_search(*, caps: config.Caps = config.DEFAULT_CAPS) -> List[InsufficiencyWitness]:
    """
    Two witnesses, in this order, at ``alpha =`` :py:data:`INSUFFICIENCY_ALPHA`:

    * ``plc_only``: lattice condition holds, cut independence fails, ``nu`` not positively associated.
      Built from :py:data:`PLC_ONLY_PROB`.
    * ``cut_independence_only``: cut independence holds, lattice condition fails, ``nu`` not positively
      associated. Built from :py:data:`CUT_ONLY_PROB`; association is checked on the leaves.

    Every reported verdict is recomputed from the returned table.

    Raises:
        error.VerificationError: one of the tables does not have the advertised verdicts.
    """
    plc_only = _insufficiency_witness("plc_only", PLC_ONLY_GRAPH, PLC_ONLY_PROB, range(4), caps)
    if not (plc_only.plc and not plc_only.cut_independence and not plc_only.association):
        raise error.VerificationError(f"The lattice-condition-only table is not a witness: {plc_only}")
    cut_only = _insufficiency_witness("cut_independence_only", CUT_ONLY_GRAPH, CUT_ONLY_PROB, CUT_ONLY_LEAVES, caps)
    if not (cut_only.cut_independence and not cut_only.plc and not cut_only.association):
        raise error.VerificationError(f"The cut-independence-only table is not a witness: {cut_only}")
    return [plc_only, cut_only]


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class ForestLimitScan(dto_defaults.HasFromJsonString):
    """Total variation between ``phi_{q,q}`` and the uniform forest measure, ``q`` descending."""

    graph: Dict[str, Any] = attrs.field()
    q_values: List[Fraction] = attrs.field()
    distances: List[Fraction] = attrs.field()


def forest_limit_scan(
    graph: graph_mod.Graph,
    q_values: Sequence[Any] = DEFAULT_FOREST_LIMIT_Q,
    *,
    caps: config.Caps = config.DEFAULT_CAPS,
) -> ForestLimitScan:
    """
    ``tv(random_cluster(g, q, q), uniform_forest(g))`` for each ``q`` (with ``p_e = q``).

    Raises:
        error.VerificationError: the graph has edges and the distance does not strictly decrease as ``q``
            decreases. Without edges both measures are the same point mass.
    """
    values = sorted(set(_rationals(q_values, "q_values")), reverse=True)
    for value in values:
        preprocess.probability_open(value, "q")
    forests = edge_measure.uniform_forest(graph, caps=caps)
    distances = [
        edge_measure.tv_distance(edge_measure.random_cluster(graph, value, value, caps=caps), forests)
        for value in values
    ]
    for (q_big, d_big), (q_small, d_small) in zip(zip(values, distances), zip(values[1:], distances[1:])):
        if graph.edge_count and not d_small < d_big:
            raise error.VerificationError(
                f"Distance to the uniform forest measure on {graph} does not shrink from q={q_big} ({d_big}) "
                f"to q={q_small} ({d_small})"
            )
    return ForestLimitScan(graph=graph_dict(graph), q_values=values, distances=distances)


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class NonincidentFinding(dto_defaults.HasFromJsonString):
    """A vertex ``x``, an edge ``e`` not containing it, and the failing conditional correlation."""

    graph: Dict[str, Any] = attrs.field()
    vertex: int = attrs.field()
    edge: int = attrs.field()
    result: verdict.Verdict = attrs.field()


def nonincident_lemma2_search(
    corpus: Sequence[graph_mod.Graph],
    q: Any = 2,
    p: Any = Fraction(1, 2),
    alpha: Any = Fraction(1, 2),
    *,
    caps: config.Caps = config.DEFAULT_CAPS,
) -> List[NonincidentFinding]:
    """
    Conditional correlation of up-sets with ``{eta_e = 1}`` given ``sigma_x = +1`` for edges ``e`` that do
    not contain ``x``. Returns every failing ``(graph, x, e)``; nothing is asserted.
    """
    findings = []
    for graph in corpus:
        if graph.edge_count == 0:
            continue
        joint = spin_measure.joint_fuzzy_potts(edge_measure.random_cluster(graph, p, q, caps=caps), alpha, caps=caps)
        for vertex, edge in itertools.product(range(graph.vertex_count), range(graph.edge_count)):
            if graph.is_incident(edge, vertex):
                continue
            result = association.lemma2_check(joint, vertex, edge, require_incident=False, caps=caps)
            if not result:
                findings.append(NonincidentFinding(graph=graph_dict(graph), vertex=vertex, edge=edge, result=result))
    _LOGGER.info("Non-incident search: %d failing (graph, x, e) triples", len(findings))
    return findings
