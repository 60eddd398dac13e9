# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""
Increasing events and exact correlation checks.

An up-set over ``n`` coordinates is stored as a membership mask over the ``2^n`` configuration ranks:
bit ``r`` is set iff the configuration with rank ``r`` belongs to the event. Enumeration order is
ascending membership mask, which puts the empty event first and ``{all ones}`` second.
"""
import concurrent.futures
import math
import operator
import random
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import attrs
import cachetools

from py_fuzzy_potts import edge_measure, spin_measure
from py_fuzzy_potts.common import config, const, error, logger, preprocess
from py_fuzzy_potts.dto import verdict

_LOGGER = logger.get(__name__)
_UPSET_CACHE_SIZE: int = 8
_SPLIT_PAIRS_ABOVE: int = 1 << 16

ProductMeasure = Union[edge_measure.EdgeMeasure, spin_measure.SpinMeasure]


@attrs.define(**const.ATTRS_DEFAULTS)  # type: ignore
class UpSet:
    """Upward closed event over ``{0, 1}^coordinate_count`` (``{-1, +1}`` for spins)."""

    coordinate_count: int = attrs.field(validator=attrs.validators.instance_of(int))
    mask: int = attrs.field(validator=attrs.validators.instance_of(int))

    @mask.validator
    def _mask_validator(self, attribute: attrs.Attribute, value: int) -> None:
        size = 1 << self.coordinate_count
        if not 0 <= value < 1 << size:
            raise ValueError(f"Argument '{attribute.name}' must select ranks in [0, {size}). Got: {value:b}")
        for rank in _members(value):
            for coord in range(self.coordinate_count):
                if not value >> (rank | 1 << coord) & 1:
                    raise ValueError(
                        f"Argument '{attribute.name}' is not upward closed: {rank} is in, {rank | 1 << coord} is not"
                    )

    @classmethod
    def from_members(cls, coordinate_count: int, members: Iterable[int]) -> "UpSet":
        """From configuration ranks."""
        return UpSet(coordinate_count=coordinate_count, mask=sum({1 << rank for rank in members}))

    @classmethod
    def coordinate_is_one(cls, coordinate_count: int, coord: int) -> "UpSet":
        """``{x_coord = 1}``"""
        ranks = (rank for rank in range(1 << coordinate_count) if rank >> coord & 1)
        return UpSet.from_members(coordinate_count, ranks)

    @property
    def config_count(self) -> int:
        """``2^coordinate_count``"""
        return 1 << self.coordinate_count

    def contains(self, rank: int) -> bool:
        """Membership of one configuration."""
        return bool(self.mask >> rank & 1)

    def members(self) -> List[int]:
        """Sorted configuration ranks."""
        return list(_members(self.mask))

    def flipped_complement(self) -> "UpSet":
        """``{sigma : -sigma not in A}``, again an up-set."""
        full = self.config_count - 1
        return UpSet(
            coordinate_count=self.coordinate_count,
            mask=sum(1 << rank for rank in range(self.config_count) if not self.mask >> (rank ^ full) & 1),
        )


def _members(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _WeightTable:
    """Integer weights over configuration ranks, proportional to a measure restricted to some event."""

    def __init__(self, weights: Sequence[int]):
        self._weights: List[int] = list(weights)
        self._masses: Dict[int, int] = {}
        self.total: int = sum(self._weights)

    def mass(self, mask: int) -> int:
        """Weight of the event ``mask``."""
        result = self._masses.get(mask)
        if result is None:
            result = sum(self._weights[rank] for rank in _members(mask))
            self._masses[mask] = result
        return result

    def is_positive(self, mask_a: int, mask_b: int) -> bool:
        """``Pr(AB) >= Pr(A) Pr(B)``; the table must have positive total."""
        return self.total * self.mass(mask_a & mask_b) >= self.mass(mask_a) * self.mass(mask_b)

    def covariance(self, mask_a: int, mask_b: int) -> Fraction:
        """``Pr(AB) - Pr(A) Pr(B)``"""
        numerator = self.total * self.mass(mask_a & mask_b) - self.mass(mask_a) * self.mass(mask_b)
        return Fraction(numerator, self.total * self.total)


def _scaled(*tables: Sequence[Fraction]) -> List[List[int]]:
    """Common-denominator integer copies of the tables."""
    denominator = math.lcm(*(val.denominator for table in tables for val in table))
    return [[val.numerator * (denominator // val.denominator) for val in table] for table in tables]


def _product_table(measure: ProductMeasure) -> Tuple[Sequence[Fraction], int]:
    if not isinstance(measure, (edge_measure.EdgeMeasure, spin_measure.SpinMeasure)):
        raise TypeError(f"Argument 'measure' must be an edge or two-color spin measure. Got: {type(measure)}")
    return measure.prob, measure.coordinate_count


def _check_upset(upset: UpSet, coordinate_count: int, name: str) -> int:
    preprocess.validate_type(upset, name, UpSet)
    if upset.coordinate_count != coordinate_count:
        raise ValueError(f"Argument '{name}' lives on {upset.coordinate_count} coordinates, not {coordinate_count}")
    return upset.mask


@cachetools.cached(cache=cachetools.LRUCache(maxsize=_UPSET_CACHE_SIZE))
def _upset_masks(coordinate_count: int) -> Tuple[int, ...]:
    # an up-set splits into (part with last coordinate 0, part with last coordinate 1) with the first inside the second
    if coordinate_count == 0:
        return (0, 1)
    half = 1 << (coordinate_count - 1)
    lower = _upset_masks(coordinate_count - 1)
    lifted = []
    for bottom in lower:
        for top in lower:
            if bottom & ~top == 0:
                lifted.append(bottom | top << half)
    return tuple(sorted(lifted))


def enumerate_upsets(coordinate_count: int, *, caps: config.Caps = config.DEFAULT_CAPS) -> List[UpSet]:
    """
    Every up-set of ``{0, 1}^coordinate_count``, empty and full included, ascending by mask.

    Raises:
        error.SizeCapError: ``coordinate_count`` above the association cap.
    """
    preprocess.integer(coordinate_count, "coordinate_count", lower_bound=0)
    caps.check_pa_vertices(coordinate_count, "up-set enumeration")
    return [UpSet(coordinate_count=coordinate_count, mask=mask) for mask in _upset_masks(coordinate_count)]


def principal_upsets(coordinate_count: int) -> List[UpSet]:
    """``{x >= x0}`` for every ``x0``, ascending by mask."""
    preprocess.integer(coordinate_count, "coordinate_count", lower_bound=0)
    size = 1 << coordinate_count
    masks = []
    for bottom in range(size):
        masks.append(sum(1 << rank for rank in range(size) if bottom & ~rank == 0))
    return [UpSet(coordinate_count=coordinate_count, mask=mask) for mask in sorted(masks)]


def correlation(measure: ProductMeasure, upset_a: UpSet, upset_b: UpSet) -> Fraction:
    """``Pr(AB) - Pr(A) Pr(B)``"""
    prob, coordinate_count = _product_table(measure)
    mask_a = _check_upset(upset_a, coordinate_count, "upset_a")
    mask_b = _check_upset(upset_b, coordinate_count, "upset_b")
    return _WeightTable(_scaled(prob)[0]).covariance(mask_a, mask_b)


def _first_negative_pair(
    weights: Sequence[int], masks: Sequence[int], start: int, stop: int
) -> Tuple[int, Optional[Tuple[int, int]]]:
    """Scans rows ``start..stop-1`` of the pairs ``i <= j``; returns pairs checked and the first failure."""
    table = _WeightTable(weights)
    checked = 0
    for row in range(start, stop):
        for col in range(row, len(masks)):
            checked += 1
            if not table.is_positive(masks[row], masks[col]):
                return checked, (row, col)
    return checked, None


def _row_chunks(row_count: int, pair_count: int, workers: int) -> List[Tuple[int, int]]:
    # rows get shorter, so chunk by pair count rather than row count
    target = max(1, pair_count // (workers * 4))
    chunks = []
    start = 0
    acc = 0
    for row in range(row_count):
        acc += row_count - row
        if acc >= target:
            chunks.append((start, row + 1))
            start, acc = row + 1, 0
    if start < row_count:
        chunks.append((start, row_count))
    return chunks


def positive_association_check(
    measure: ProductMeasure, *, caps: config.Caps = config.DEFAULT_CAPS, workers: int = 1
) -> verdict.Verdict:
    """
    ``Pr(AB) >= Pr(A) Pr(B)`` for every pair of up-sets ``A``, ``B``.

    Pairs are scanned as ``(A, B)`` with ``A`` before or equal to ``B`` in enumeration order.
    With ``workers > 1`` row blocks run in separate processes and the earliest failing block wins,
    so the verdict is the serial one.

    Args:
        measure: edge measure or two-color spin measure.
        caps: enumeration caps.
        workers: worker processes.

    Raises:
        error.SizeCapError: too many coordinates.
    """
    prob, coordinate_count = _product_table(measure)
    workers = preprocess.integer(workers, "workers", lower_bound=1)  # type: ignore
    upsets = enumerate_upsets(coordinate_count, caps=caps)
    masks = [upset.mask for upset in upsets]
    weights = _scaled(prob)[0]
    pair_count = len(masks) * (len(masks) + 1) // 2
    if workers == 1 or pair_count <= _SPLIT_PAIRS_ABOVE:
        results = [_first_negative_pair(weights, masks, 0, len(masks))]
    else:
        chunks = _row_chunks(len(masks), pair_count, workers)
        _LOGGER.debug("Splitting %d up-set pairs in %d blocks over %d workers", pair_count, len(chunks), workers)
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(_first_negative_pair, weights, masks, start, stop) for start, stop in chunks]
            _ = concurrent.futures.wait(futures)
        results = [future.result() for future in futures]
    checked = 0
    for block_checked, failure in results:
        checked += block_checked
        if failure is not None:
            row, col = failure
            covariance = _WeightTable(weights).covariance(masks[row], masks[col])
            _LOGGER.warning("Positive association fails: covariance %s", covariance)
            return verdict.Verdict(
                check="positive_association",
                holds=False,
                checked=checked,
                witness={"a": upsets[row].members(), "b": upsets[col].members(), "covariance": covariance},
            )
    return verdict.Verdict(
        check="positive_association", holds=True, checked=checked, details={"upset_count": len(masks)}
    )


def lemma1_decomposition_check(
    measure: ProductMeasure, upset_a: UpSet, upset_b: UpSet, event_c: UpSet
) -> verdict.Verdict:
    """
    One instance of: if ``A``, ``B`` are each positively correlated with ``C`` and ``A``, ``B`` are positively
    correlated given ``C`` and given its complement, then ``A`` and ``B`` are positively correlated.

    All five covariances are reported in ``details`` (conditional ones are :py:obj:`None` on a null event).
    The verdict fails only if both hypotheses hold and the conclusion does not.
    """
    prob, coordinate_count = _product_table(measure)
    mask_a = _check_upset(upset_a, coordinate_count, "upset_a")
    mask_b = _check_upset(upset_b, coordinate_count, "upset_b")
    mask_c = _check_upset(event_c, coordinate_count, "event_c")
    weights = _scaled(prob)[0]
    table = _WeightTable(weights)
    given_c = _WeightTable([val if mask_c >> rank & 1 else 0 for rank, val in enumerate(weights)])
    given_not_c = _WeightTable([0 if mask_c >> rank & 1 else val for rank, val in enumerate(weights)])
    cov_a_c = table.covariance(mask_a, mask_c)
    cov_b_c = table.covariance(mask_b, mask_c)
    cov_given_c = given_c.covariance(mask_a, mask_b) if given_c.total else None
    cov_given_not_c = given_not_c.covariance(mask_a, mask_b) if given_not_c.total else None
    cov_a_b = table.covariance(mask_a, mask_b)
    correlated_with_c = cov_a_c >= 0 and cov_b_c >= 0
    conditionally_correlated = all(val is None or val >= 0 for val in (cov_given_c, cov_given_not_c))
    details = {
        "cov_a_c": cov_a_c,
        "cov_b_c": cov_b_c,
        "cov_given_c": cov_given_c,
        "cov_given_not_c": cov_given_not_c,
        "cov_a_b": cov_a_b,
        "correlated_with_c": correlated_with_c,
        "conditionally_correlated": conditionally_correlated,
        "vacuous": not (correlated_with_c and conditionally_correlated),
    }
    holds = details["vacuous"] or cov_a_b >= 0
    return verdict.Verdict(
        check="lemma1",
        holds=bool(holds),
        checked=1,
        witness=None if holds else {"cov_a_b": cov_a_b},
        details=details,
    )


class _JointTables:
    """Integer weights over spin ranks of a two-color joint measure, given ``sigma_x = +1``."""

    def __init__(self, joint: spin_measure.JointMeasure, vertex: int, edge: int):
        size = 1 << joint.vertex_count
        given_all = [Fraction(0)] * size
        given_open = [Fraction(0)] * size
        spins = [Fraction(0)] * size
        for edge_rank, rank, val in joint.entries:
            spins[rank] += val
            if rank >> vertex & 1:
                given_all[rank] += val
                if edge_rank >> edge & 1:
                    given_open[rank] += val
        spins_w, all_w, open_w = _scaled(spins, given_all, given_open)
        self.spins = _WeightTable(spins_w)
        self.given = _WeightTable(all_w)
        self.given_open = _WeightTable(open_w)
        self.given_closed = _WeightTable([val_all - val_open for val_all, val_open in zip(all_w, open_w)])

    def lemma2_covariance(self, mask: int) -> Fraction:
        """``Pr(C, eta_e = 1 | sigma_x = 1) - Pr(C | sigma_x = 1) Pr(eta_e = 1 | sigma_x = 1)``"""
        total = self.given.total
        numerator = total * self.given_open.mass(mask) - self.given.mass(mask) * self.given_open.total
        return Fraction(numerator, total * total)


def _check_joint(joint: spin_measure.JointMeasure, vertex: int, edge: int, require_incident: bool) -> None:
    preprocess.validate_type(joint, "joint", spin_measure.JointMeasure)
    if joint.colors != spin_measure.PLUS_MINUS:
        raise ValueError(f"Joint measure must use colors {spin_measure.PLUS_MINUS}. Got: {joint.colors}")
    joint.graph.check_vertex(vertex)
    joint.graph.check_edge(edge)
    if require_incident and not joint.graph.is_incident(edge, vertex):
        raise error.PreconditionError(
            f"Edge {edge}={joint.graph.edges[edge]} does not contain vertex {vertex}, "
            "conditional correlation with the edge needs the edge to contain the vertex"
        )


def lemma2_covariance(joint: spin_measure.JointMeasure, vertex: int, edge: int, event_c: UpSet) -> Fraction:
    """
    ``Cov(1_C, 1_{eta_e = 1})`` under the joint measure conditioned on ``sigma_x = +1``.
    """
    _check_joint(joint, vertex, edge, require_incident=False)
    mask = _check_upset(event_c, joint.vertex_count, "event_c")
    return _JointTables(joint, vertex, edge).lemma2_covariance(mask)


def _lemma2_family(coordinate_count: int, caps: config.Caps) -> Tuple[str, List[UpSet]]:
    if coordinate_count <= caps.resolved().max_pa_vertices:  # type: ignore
        return "all", enumerate_upsets(coordinate_count, caps=caps)
    return "principal", principal_upsets(coordinate_count)


def lemma2_check(
    joint: spin_measure.JointMeasure,
    vertex: int,
    edge: int,
    *,
    require_incident: bool = True,
    caps: config.Caps = config.DEFAULT_CAPS,
) -> verdict.Verdict:
    """
    Every spin up-set ``C`` is positively correlated with ``{eta_e = 1}`` given ``{sigma_x = +1}``.

    Up-sets are all of them when ``|V|`` is within the association cap, otherwise the principal ones
    ``{sigma >= sigma0}`` (``details["family"]`` says which).

    Args:
        joint: two-color joint measure.
        vertex: ``x``.
        edge: ``e``, an edge containing ``x`` unless ``require_incident`` is off.
        require_incident: refuse edges not containing ``x``.
        caps: enumeration caps.

    Raises:
        error.PreconditionError: ``e`` does not contain ``x`` and ``require_incident`` is on.
    """
    _check_joint(joint, vertex, edge, require_incident)
    tables = _JointTables(joint, vertex, edge)
    family, upsets = _lemma2_family(joint.vertex_count, caps)
    details = {"family": family, "vertex": vertex, "edge": edge}
    checked = 0
    for upset in upsets:
        checked += 1
        covariance = tables.lemma2_covariance(upset.mask)
        if covariance < 0:
            _LOGGER.warning("Conditional correlation with edge %d fails: covariance %s", edge, covariance)
            return verdict.Verdict(
                check="lemma2",
                holds=False,
                checked=checked,
                witness={"upset": upset.members(), "covariance": covariance},
                details=details,
            )
    return verdict.Verdict(check="lemma2", holds=True, checked=checked, details=details)


def induction_step_check(
    joint: spin_measure.JointMeasure, vertex: int, edge: int, *, caps: config.Caps = config.DEFAULT_CAPS
) -> verdict.Verdict:
    """
    The ingredients of the inductive step, in order, for every pair of spin up-sets ``A``, ``B``:

    1. ``{sigma_x = 1}`` is positively correlated with ``A``;
    2. ``A`` is positively correlated with ``{eta_e = 1}`` given ``sigma_x = 1``;
    3. ``A``, ``B`` positively correlated given ``sigma_x = 1, eta_e = 1`` and given ``sigma_x = 1, eta_e = 0``
       (null events are vacuous);
    4. ``A``, ``B`` positively correlated given ``sigma_x = 1``.

    The witness names the first failing ingredient.
    """
    _check_joint(joint, vertex, edge, require_incident=True)
    upsets = enumerate_upsets(joint.vertex_count, caps=caps)
    tables = _JointTables(joint, vertex, edge)
    plus_x = UpSet.coordinate_is_one(joint.vertex_count, vertex).mask
    checked = 0
    skipped = 0

    def failed(ingredient: str, covariance: Fraction, *upset_pair: UpSet) -> verdict.Verdict:
        witness = {"ingredient": ingredient, "covariance": covariance}
        witness.update({name: upset.members() for name, upset in zip(("a", "b"), upset_pair)})
        return verdict.Verdict(check="induction_step", holds=False, checked=checked, skipped=skipped, witness=witness)

    for upset in upsets:
        checked += 1
        if not tables.spins.is_positive(plus_x, upset.mask):
            return failed("plus_x_correlated", tables.spins.covariance(plus_x, upset.mask), upset)
    for upset in upsets:
        checked += 1
        covariance = tables.lemma2_covariance(upset.mask)
        if covariance < 0:
            return failed("edge_correlated", covariance, upset)
    for name, table in (("given_edge_open", tables.given_open), ("given_edge_closed", tables.given_closed)):
        if table.total == 0:
            skipped += len(upsets) * (len(upsets) + 1) // 2
            continue
        for row, upset_a in enumerate(upsets):
            for upset_b in upsets[row:]:
                checked += 1
                if not table.is_positive(upset_a.mask, upset_b.mask):
                    return failed(name, table.covariance(upset_a.mask, upset_b.mask), upset_a, upset_b)
    for row, upset_a in enumerate(upsets):
        for upset_b in upsets[row:]:
            checked += 1
            if not tables.given.is_positive(upset_a.mask, upset_b.mask):
                return failed("conclusion", tables.given.covariance(upset_a.mask, upset_b.mask), upset_a, upset_b)
    return verdict.Verdict(check="induction_step", holds=True, checked=checked, skipped=skipped)


def complement_symmetry_check(
    measure: spin_measure.SpinMeasure, vertex: int, *, caps: config.Caps = config.DEFAULT_CAPS
) -> verdict.Verdict:
    """
    ``Cov(A, B | sigma_x = -1)`` under ``nu`` equals ``Cov(A*, B* | sigma_x = +1)`` under the flipped
    measure, where ``A* = {sigma : -sigma not in A}``. Hence positive correlation given ``sigma_x = +1`` for
    all up-set pairs carries over to ``sigma_x = -1``.
    """
    measure.require_plus_minus()
    preprocess.integer(vertex, "vertex", lower_bound=0, upper_bound=measure.vertex_count - 1)
    upsets = enumerate_upsets(measure.vertex_count, caps=caps)
    flipped = spin_measure.flip(measure)
    minus_w, plus_w = _scaled(
        [val if not rank >> vertex & 1 else Fraction(0) for rank, val in enumerate(measure.prob)],
        [val if rank >> vertex & 1 else Fraction(0) for rank, val in enumerate(flipped.prob)],
    )
    given_minus, given_plus_flipped = _WeightTable(minus_w), _WeightTable(plus_w)
    starred = [upset.flipped_complement().mask for upset in upsets]
    checked = 0
    for row, upset_a in enumerate(upsets):
        for col in range(row, len(upsets)):
            checked += 1
            lhs = given_minus.covariance(upset_a.mask, upsets[col].mask)
            rhs = given_plus_flipped.covariance(starred[row], starred[col])
            if lhs != rhs:
                return verdict.Verdict(
                    check="complement_symmetry",
                    holds=False,
                    checked=checked,
                    witness={"a": upset_a.members(), "b": upsets[col].members(), "given_minus": lhs, "flipped": rhs},
                )
    return verdict.Verdict(check="complement_symmetry", holds=True, checked=checked)


def increasing_function_check(
    measure: ProductMeasure,
    *,
    seed: int = 0,
    trials: int = 100,
    max_terms: int = 3,
    max_coefficient: int = 5,
    caps: config.Caps = config.DEFAULT_CAPS,
) -> verdict.Verdict:
    """
    ``E fg >= E f E g`` for random increasing ``f``, ``g`` built as nonnegative integer combinations of up-set
    indicators. Only meaningful when the measure is positively associated; otherwise every trial is skipped.

    Args:
        measure: edge or two-color spin measure.
        seed: generator seed.
        trials: number of ``(f, g)`` pairs.
        max_terms: up-set indicators per function.
        max_coefficient: largest coefficient.
        caps: enumeration caps.
    """
    prob, coordinate_count = _product_table(measure)
    trials = preprocess.integer(trials, "trials", lower_bound=1)  # type: ignore
    if not positive_association_check(measure, caps=caps):
        return verdict.Verdict(
            check="increasing_functions", holds=True, skipped=trials, details={"positively_associated": False}
        )
    upsets = enumerate_upsets(coordinate_count, caps=caps)
    rng = random.Random(seed)

    def random_function() -> List[int]:
        values = [0] * len(prob)
        for _ in range(rng.randint(1, max_terms)):
            coefficient = rng.randint(0, max_coefficient)
            for rank in rng.choice(upsets).members():
                values[rank] += coefficient
        return values

    for trial in range(trials):
        func_f, func_g = random_function(), random_function()
        mean_f = sum(map(operator.mul, prob, func_f), Fraction(0))
        mean_g = sum(map(operator.mul, prob, func_g), Fraction(0))
        mean_fg = sum((val * f_val * g_val for val, f_val, g_val in zip(prob, func_f, func_g)), Fraction(0))
        if mean_fg < mean_f * mean_g:
            return verdict.Verdict(
                check="increasing_functions",
                holds=False,
                checked=trial + 1,
                witness={"f": func_f, "g": func_g, "covariance": mean_fg - mean_f * mean_g},
            )
    return verdict.Verdict(
        check="increasing_functions", holds=True, checked=trials, details={"positively_associated": True}
    )
