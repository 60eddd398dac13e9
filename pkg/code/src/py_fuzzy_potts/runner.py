# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""
Runs one :py:class:`run_config.RunConfig` and returns its report and exit code.

Exit codes: :py:data:`EXIT_OK`, :py:data:`EXIT_FAILURE` (a check does not hold, a cap refuses the instance
or the input is invalid) and :py:data:`EXIT_PROBE_VIOLATION`.
"""
import pathlib
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from py_fuzzy_potts import association, coupling, edge_measure, explorer
from py_fuzzy_potts import graph as graph_mod
from py_fuzzy_potts import report, spin_measure, suite
from py_fuzzy_potts.common import const, logger, preprocess
from py_fuzzy_potts.dto import run_config

_LOGGER = logger.get(__name__)

EXIT_OK: int = 0
EXIT_FAILURE: int = 1
EXIT_PROBE_VIOLATION: int = 2
DEFAULT_CHECK_Q: Fraction = Fraction(1)
DEFAULT_ES_Q: int = 2
DEFAULT_LEMMA2_ALPHA: Fraction = Fraction(1, 2)

Command = run_config.Command


def load_run_config(config_file: Optional[pathlib.Path], override: run_config.RunConfig) -> run_config.RunConfig:
    """
    ``override`` patched with the content of ``config_file`` (if given), then defaults.
    """
    result = override
    if config_file is not None:
        config_file = preprocess.path(config_file, "config_file", exists=True, is_file=True, can_read=True)
        with open(config_file, encoding=const.ENCODING_UTF8) as in_file:
            base = run_config.RunConfig.from_json(in_file.read(), context=str(config_file))
        result = override.patch_with(base)
    return result.with_defaults()


def build_graph(cfg: run_config.RunConfig) -> graph_mod.Graph:
    """From ``graph_file`` or, failing that, ``family`` with ``size`` (``m`` for ``figure1``)."""
    if cfg.graph_file is not None:
        return graph_mod.load_graph(pathlib.Path(cfg.graph_file))
    if cfg.family is None:
        raise ValueError("A graph is needed: give a graph file or a family")
    if cfg.family.lower() == "figure1":
        return graph_mod.figure1_graph(cfg.m if cfg.size is None else cfg.size).graph  # type: ignore
    if cfg.size is None:
        raise ValueError(f"Family '{cfg.family}' needs a size")
    return graph_mod.family(cfg.family, cfg.size)


def _has_graph(cfg: run_config.RunConfig) -> bool:
    return cfg.graph_file is not None or cfg.family is not None


def _corpus(cfg: run_config.RunConfig) -> List[graph_mod.Graph]:
    return [build_graph(cfg)] if _has_graph(cfg) else explorer.default_corpus()


def _p(cfg: run_config.RunConfig) -> Union[Fraction, Tuple[Fraction, ...]]:
    if isinstance(cfg.p, list):
        return tuple(preprocess.rational(val, f"p[{ndx}]") for ndx, val in enumerate(cfg.p))
    return preprocess.rational(cfg.p, "p")


def _q(cfg: run_config.RunConfig, default: Any = DEFAULT_CHECK_Q) -> Fraction:
    return preprocess.rational(default if cfg.q is None else cfg.q, "q")


def _alpha(cfg: run_config.RunConfig) -> Optional[Fraction]:
    return None if cfg.alpha is None else preprocess.probability_open(cfg.alpha, "alpha")


def _values(values: Optional[List[Any]], defaults: Tuple[Fraction, ...], name: str) -> List[Fraction]:
    chosen = defaults if values is None else values
    return [preprocess.rational(val, f"{name}[{ndx}]") for ndx, val in enumerate(chosen)]


def _edge_measure(cfg: run_config.RunConfig, graph: graph_mod.Graph) -> edge_measure.EdgeMeasure:
    if cfg.measure == run_config.MeasureKind.UNIFORM_FOREST:
        result = edge_measure.uniform_forest(graph, caps=cfg.caps)  # type: ignore
    elif cfg.measure == run_config.MeasureKind.PRODUCT:
        result = edge_measure.product_measure(graph, _p(cfg), caps=cfg.caps)  # type: ignore
    else:
        result = edge_measure.random_cluster(graph, _p(cfg), _q(cfg), caps=cfg.caps)  # type: ignore
    return result


def _measure_inputs(cfg: run_config.RunConfig, graph: graph_mod.Graph) -> Dict[str, Any]:
    inputs: Dict[str, Any] = {"graph": explorer.graph_dict(graph), "measure": cfg.measure}
    if cfg.measure != run_config.MeasureKind.UNIFORM_FOREST:
        inputs["p"] = _p(cfg)
    if cfg.measure == run_config.MeasureKind.RANDOM_CLUSTER:
        inputs["q"] = _q(cfg)
    if cfg.alpha is not None:
        inputs["alpha"] = _alpha(cfg)
    return inputs


def _product_measure(
    cfg: run_config.RunConfig, graph: graph_mod.Graph
) -> Tuple[str, Union[edge_measure.EdgeMeasure, spin_measure.SpinMeasure]]:
    measure = _edge_measure(cfg, graph)
    alpha = _alpha(cfg)
    if alpha is None:
        return "edge", measure
    return "spin", spin_measure.fuzzy_potts(measure, alpha, caps=cfg.caps)  # type: ignore


def _state(kind: str, rank: int, width: int) -> str:
    if kind == "edge":
        return "".join(str(rank >> ndx & 1) for ndx in range(width))
    return "".join("+" if rank >> ndx & 1 else "-" for ndx in range(width))


def _run_measure(cfg: run_config.RunConfig) -> report.RunResult:
    graph = build_graph(cfg)
    kind, measure = _product_measure(cfg, graph)
    width = graph.edge_count if kind == "edge" else graph.vertex_count
    table = [
        {"rank": rank, "state": _state(kind, rank, width), "probability": val} for rank, val in enumerate(measure.prob)
    ]
    rows: List[List[Any]] = [["rank", "exact", "decimal"]]
    rows.extend([rank] + report.rational_columns(val) for rank, val in enumerate(measure.prob))
    return report.RunResult(
        exit_code=EXIT_OK,
        report=report.envelope(Command.MEASURE, _measure_inputs(cfg, graph), {"kind": kind, "table": table}),
        rows=rows,
    )


def _verdict_result(command: Command, inputs: Dict[str, Any], kind: str, result: Any) -> report.RunResult:
    return report.RunResult(
        exit_code=EXIT_OK if result else EXIT_FAILURE,
        report=report.envelope(command, inputs, {"kind": kind, "verdict": result.as_dict(for_json=True)}),
    )


def _run_check_plc(cfg: run_config.RunConfig) -> report.RunResult:
    graph = build_graph(cfg)
    kind, measure = _product_measure(cfg, graph)
    if isinstance(measure, spin_measure.SpinMeasure):
        result = spin_measure.plc_check_spin(measure)
    else:
        result = edge_measure.plc_check(measure)
    return _verdict_result(Command.CHECK_PLC, _measure_inputs(cfg, graph), kind, result)


def _run_check_pa(cfg: run_config.RunConfig) -> report.RunResult:
    graph = build_graph(cfg)
    kind, measure = _product_measure(cfg, graph)
    result = association.positive_association_check(measure, caps=cfg.caps, workers=cfg.workers)  # type: ignore
    return _verdict_result(Command.CHECK_PA, _measure_inputs(cfg, graph), kind, result)


def _designation(cfg: run_config.RunConfig, graph: graph_mod.Graph) -> Tuple[int, int]:
    edge = graph.check_edge(0 if cfg.edge is None else cfg.edge)
    vertex = graph.check_vertex(min(graph.edges[edge]) if cfg.vertex is None else cfg.vertex)
    return edge, vertex


def _run_check_lemma2(cfg: run_config.RunConfig) -> report.RunResult:
    graph = build_graph(cfg)
    edge, vertex = _designation(cfg, graph)
    alpha = DEFAULT_LEMMA2_ALPHA if cfg.alpha is None else _alpha(cfg)
    joint = spin_measure.joint_fuzzy_potts(_edge_measure(cfg, graph), alpha, caps=cfg.caps)  # type: ignore
    lemma2 = association.lemma2_check(joint, vertex, edge, caps=cfg.caps)  # type: ignore
    result: Dict[str, Any] = {"lemma2": lemma2.as_dict(for_json=True)}
    holds = lemma2.holds
    if graph.vertex_count <= cfg.caps.max_pa_vertices:  # type: ignore
        induction = association.induction_step_check(joint, vertex, edge, caps=cfg.caps)  # type: ignore
        result["induction_step"] = induction.as_dict(for_json=True)
        holds = holds and induction.holds
    inputs = _measure_inputs(cfg, graph)
    inputs.update({"alpha": alpha, "edge": edge, "vertex": vertex})
    return report.RunResult(
        exit_code=EXIT_OK if holds else EXIT_FAILURE,
        report=report.envelope(Command.CHECK_LEMMA2, inputs, result),
    )


def _run_couple(cfg: run_config.RunConfig) -> report.RunResult:
    graph = build_graph(cfg)
    edge, vertex = _designation(cfg, graph)
    p, q = _p(cfg), _q(cfg)
    built = coupling.build_coupling(graph, p, q, edge, vertex, rule=cfg.rule, caps=cfg.caps)  # type: ignore
    checks = coupling.verify_coupling(built, graph, p, q, caps=cfg.caps)  # type: ignore
    sampler = coupling.CouplingSampler(graph, p, q, edge, vertex, rule=cfg.rule, caps=cfg.caps)  # type: ignore
    samples = sampler.sample_many(cfg.samples, cfg.seed)  # type: ignore
    result: Dict[str, Any] = {
        "coupling": built.as_report(),
        "checks": [item.as_dict(for_json=True) for item in checks.verdicts()],
        "holds": checks.holds,
        "samples": [list(sample) for sample in samples],
    }
    holds = checks.holds or not built.domination_guaranteed
    alpha = _alpha(cfg)
    if alpha is not None:
        events = association.principal_upsets(graph.vertex_count)
        if graph.vertex_count <= cfg.caps.max_pa_vertices:  # type: ignore
            events = association.enumerate_upsets(graph.vertex_count, caps=cfg.caps)  # type: ignore
        via_coupling = _lemma2_via_coupling(built, alpha, events, cfg)
        result["lemma2_via_coupling"] = via_coupling
        holds = holds and via_coupling["holds"]
    inputs = {
        "graph": explorer.graph_dict(graph),
        "p": p,
        "q": q,
        "edge": edge,
        "vertex": vertex,
        "rule": cfg.rule,
        "seed": cfg.seed,
        "samples": cfg.samples,
        "alpha": alpha,
    }
    rows: List[List[Any]] = [["leaf", "psi", "xi", "exact", "decimal"]]
    rows.extend([ndx, leaf.psi, leaf.xi] + report.rational_columns(leaf.prob) for ndx, leaf in enumerate(built.leaves))
    return report.RunResult(
        exit_code=EXIT_OK if holds else EXIT_FAILURE,
        report=report.envelope(Command.COUPLE, inputs, result),
        rows=rows,
    )


def _lemma2_via_coupling(
    built: coupling.CouplingDistribution,
    alpha: Fraction,
    events: List[association.UpSet],
    cfg: run_config.RunConfig,
) -> Dict[str, Any]:
    for ndx, event in enumerate(events):
        result = coupling.lemma2_conclusion_via_coupling(built, alpha, event, caps=cfg.caps)  # type: ignore
        if not result:
            return {
                "holds": False,
                "events_checked": ndx + 1,
                "event": event.members(),
                "verdict": result.as_dict(for_json=True),
            }
    return {"holds": True, "events_checked": len(events)}


def _run_figure1(cfg: run_config.RunConfig) -> report.RunResult:
    m = cfg.m if cfg.size is None else cfg.size
    result: Dict[str, Any] = {"analysis": explorer.figure1_analysis(m, caps=cfg.caps).as_dict(for_json=True)}
    alpha = _alpha(cfg)
    if alpha is not None:
        result["lemma2_failure"] = explorer.lemma2_failure_demo(m, alpha, caps=cfg.caps).as_dict(for_json=True)
    return report.RunResult(
        exit_code=EXIT_OK, report=report.envelope(Command.FIGURE1, {"m": m, "alpha": alpha}, result)
    )


def _run_probe_q(cfg: run_config.RunConfig) -> report.RunResult:
    corpus = _corpus(cfg)
    q_values = _values(cfg.q_values, explorer.DEFAULT_PROBE_Q, "q_values")
    p_values = _values(cfg.p_values, explorer.DEFAULT_PROBE_P, "p_values")
    alpha_values = _values(cfg.alpha_values, explorer.DEFAULT_PROBE_ALPHA, "alpha_values")
    probe = explorer.conjecture_probe_q_lt_1(
        corpus, q_values, p_values, alpha_values, caps=cfg.caps, workers=cfg.workers  # type: ignore
    )
    rows: List[List[Any]] = [["graph", "q", "p", "alpha", "holds", "checked"]]
    for cell in probe.cells:
        index = next(ndx for ndx, graph in enumerate(corpus) if explorer.graph_dict(graph) == cell.graph)
        rows.append([index, str(cell.q), str(cell.p), str(cell.alpha), cell.result.holds, cell.result.checked])
    inputs = {
        "graphs": [explorer.graph_dict(graph) for graph in corpus],
        "q_values": q_values,
        "p_values": p_values,
        "alpha_values": alpha_values,
    }
    return report.RunResult(
        exit_code=EXIT_PROBE_VIOLATION if probe.violations else EXIT_OK,
        report=report.envelope(Command.PROBE_Q, inputs, probe.as_dict(for_json=True)),
        rows=rows,
    )


def _run_boundary(cfg: run_config.RunConfig) -> report.RunResult:
    corpus = _corpus(cfg)
    grid: Any = explorer.DEFAULT_BOUNDARY_GRID
    if cfg.q_values is not None and cfg.alpha_values is not None:
        q_values = _values(cfg.q_values, (), "q_values")
        grid = [(q, alpha) for q in q_values for alpha in _values(cfg.alpha_values, (), "alpha_values")]
    scan = explorer.haggstrom_boundary_scan(corpus, grid, p=_p(cfg), caps=cfg.caps)  # type: ignore
    rows: List[List[Any]] = [["q", "alpha", "condition_met", "plc_holds", "association_holds"]]
    for cell in scan.cells:
        rows.append([str(cell.q), str(cell.alpha), cell.condition_met, all(cell.plc_holds), cell.association_holds])
    inputs = {"graphs": [explorer.graph_dict(graph) for graph in corpus], "grid": [list(pair) for pair in grid]}
    return report.RunResult(
        exit_code=EXIT_OK, report=report.envelope(Command.BOUNDARY, inputs, scan.as_dict(for_json=True)), rows=rows
    )


def _run_es_check(cfg: run_config.RunConfig) -> report.RunResult:
    graph = build_graph(cfg)
    q = _q(cfg, DEFAULT_ES_Q)
    if q.denominator != 1:
        raise ValueError(f"Argument 'q' must be an integer number of colors. Got: '{q}'")
    result = suite.es_check(graph, _p(cfg), int(q), caps=cfg.caps)  # type: ignore
    inputs = {"graph": explorer.graph_dict(graph), "p": _p(cfg), "q": q}
    return report.RunResult(
        exit_code=EXIT_OK if result["equal"] else EXIT_FAILURE,
        report=report.envelope(Command.ES_CHECK, inputs, result),
    )


def _run_corpus(cfg: run_config.RunConfig) -> report.RunResult:
    corpus = _corpus(cfg)
    results = suite.run_suite(corpus, full=cfg.full, caps=cfg.caps, workers=cfg.workers)  # type: ignore
    holds = all(result.holds for result in results)
    rows: List[List[Any]] = [["criterion", "name", "holds", "checked"]]
    rows.extend([result.criterion, result.name, result.holds, result.checked] for result in results)
    inputs = {"graphs": [explorer.graph_dict(graph) for graph in corpus], "full": cfg.full}
    payload = {"holds": holds, "criteria": [result.as_dict(for_json=True) for result in results]}
    return report.RunResult(
        exit_code=EXIT_OK if holds else EXIT_FAILURE,
        report=report.envelope(Command.CORPUS, inputs, payload),
        rows=rows,
    )


_COMMANDS: Dict[Command, Callable[[run_config.RunConfig], report.RunResult]] = {
    Command.MEASURE: _run_measure,
    Command.CHECK_PLC: _run_check_plc,
    Command.CHECK_PA: _run_check_pa,
    Command.CHECK_LEMMA2: _run_check_lemma2,
    Command.COUPLE: _run_couple,
    Command.FIGURE1: _run_figure1,
    Command.PROBE_Q: _run_probe_q,
    Command.BOUNDARY: _run_boundary,
    Command.ES_CHECK: _run_es_check,
    Command.CORPUS: _run_corpus,
}


def run(cfg: run_config.RunConfig) -> report.RunResult:
    """
    Executes ``cfg.command``. Errors propagate; the CLI maps them to :py:data:`EXIT_FAILURE`.

    Args:
        cfg: fully defaulted configuration, see :py:meth:`run_config.RunConfig.with_defaults`.
    """
    preprocess.validate_type(cfg, "cfg", run_config.RunConfig)
    if cfg.command is None:
        raise ValueError("No command given")
    _LOGGER.debug("Running %s", cfg)
    return _COMMANDS[cfg.command](cfg)
