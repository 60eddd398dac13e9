# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""Command line run configuration"""
from typing import Any, List, Optional, Union

import attrs

from py_fuzzy_potts import coupling
from py_fuzzy_potts.common import config, const, dto_defaults, preprocess

DEFAULT_P: str = "1/2"
DEFAULT_SEED: int = 0
DEFAULT_SAMPLES: int = 10
DEFAULT_WORKERS: int = 1
DEFAULT_FIGURE1_M: int = 1


class Command(dto_defaults.EnumWithFromStrIgnoreCase):
    """Supported commands."""

    MEASURE = "measure"
    CHECK_PLC = "check-plc"
    CHECK_PA = "check-pa"
    CHECK_LEMMA2 = "check-lemma2"
    COUPLE = "couple"
    FIGURE1 = "figure1"
    PROBE_Q = "probe-q"
    BOUNDARY = "boundary"
    ES_CHECK = "es-check"
    CORPUS = "corpus"


class OutputFormat(dto_defaults.EnumWithFromStrIgnoreCase):
    """Report rendering."""

    JSON = "json"
    CSV = "csv"
    TEXT = "text"

    @classmethod
    def default(cls) -> Any:
        """Default output format."""
        return OutputFormat.JSON


class MeasureKind(dto_defaults.EnumWithFromStrIgnoreCase):
    """Edge measure to build on the graph."""

    RANDOM_CLUSTER = "random-cluster"
    UNIFORM_FOREST = "uniform-forest"
    PRODUCT = "product"

    @classmethod
    def default(cls) -> Any:
        """Default edge measure."""
        return MeasureKind.RANDOM_CLUSTER


Rational = Union[str, int]


def _rational_list_converter(value: Any) -> Optional[List[Rational]]:
    if value is None or isinstance(value, list):
        return value
    if isinstance(value, tuple):
        return list(value)
    if isinstance(value, str) and "," in value:
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


def _optional_rational(instance: Any, attribute: attrs.Attribute, value: Any) -> None:
    if value is not None:
        preprocess.rational(value, attribute.name)


def _optional_rationals(instance: Any, attribute: attrs.Attribute, value: Any) -> None:
    if value is not None:
        preprocess.validate_type(value, attribute.name, list)
        for ndx, val in enumerate(value):
            preprocess.rational(val, f"{attribute.name}[{ndx}]")


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class RunConfig(dto_defaults.HasFromJsonString):
    """
    Everything a command needs. All fields are optional so a configuration file can be patched with
    command line options, see :py:meth:`dto_defaults.HasPatchWith.patch_with`.
    """

    command: Optional[Command] = attrs.field(
        default=None, validator=attrs.validators.optional(attrs.validators.instance_of(Command))
    )
    graph_file: Optional[str] = attrs.field(
        default=None, validator=attrs.validators.optional(attrs.validators.instance_of(str))
    )
    """
    Graph text file: ``vertices N`` then one ``u v`` line per edge.
    """
    family: Optional[str] = attrs.field(
        default=None, validator=attrs.validators.optional(attrs.validators.instance_of(str))
    )
    """
    Built-in family, see :py:data:`py_fuzzy_potts.graph.FAMILIES`. Ignored if ``graph_file`` is given.
    """
    size: Optional[int] = attrs.field(default=None)
    m: Optional[int] = attrs.field(default=None)
    """
    Paths of length two in the ``figure1`` family and the ``figure1`` command.
    """
    measure: Optional[MeasureKind] = attrs.field(
        default=None, validator=attrs.validators.optional(attrs.validators.instance_of(MeasureKind))
    )
    p: Optional[Union[Rational, List[Rational]]] = attrs.field(default=None, converter=_rational_list_converter)
    """
    One rational for every edge, or one per edge.
    """
    q: Optional[Rational] = attrs.field(default=None, validator=_optional_rational)
    alpha: Optional[Rational] = attrs.field(default=None, validator=_optional_rational)
    """
    With ``alpha`` the spin measure ``nu`` is used, without it the edge measure.
    """
    q_values: Optional[List[Rational]] = attrs.field(
        default=None, converter=_rational_list_converter, validator=_optional_rationals
    )
    p_values: Optional[List[Rational]] = attrs.field(
        default=None, converter=_rational_list_converter, validator=_optional_rationals
    )
    alpha_values: Optional[List[Rational]] = attrs.field(
        default=None, converter=_rational_list_converter, validator=_optional_rationals
    )
    edge: Optional[int] = attrs.field(default=None)
    vertex: Optional[int] = attrs.field(default=None)
    caps: Optional[config.Caps] = attrs.field(
        default=None, validator=attrs.validators.optional(attrs.validators.instance_of(config.Caps))
    )
    output_format: Optional[OutputFormat] = attrs.field(
        default=None, validator=attrs.validators.optional(attrs.validators.instance_of(OutputFormat))
    )
    seed: Optional[int] = attrs.field(default=None)
    samples: Optional[int] = attrs.field(default=None)
    workers: Optional[int] = attrs.field(default=None)
    rule: Optional[coupling.EdgeRule] = attrs.field(
        default=None, validator=attrs.validators.optional(attrs.validators.instance_of(coupling.EdgeRule))
    )
    full: Optional[bool] = attrs.field(default=None)
    """
    ``corpus`` only: the complete positive association grid instead of the light one.
    """

    @size.validator
    def _size_validator(self, attribute: attrs.Attribute, value: Any) -> None:
        preprocess.integer(value, attribute.name, lower_bound=1, is_none_valid=True)

    @m.validator
    def _m_validator(self, attribute: attrs.Attribute, value: Any) -> None:
        preprocess.integer(value, attribute.name, lower_bound=1, is_none_valid=True)

    @p.validator
    def _p_validator(self, attribute: attrs.Attribute, value: Any) -> None:
        if isinstance(value, list):
            _optional_rationals(self, attribute, value)
        else:
            _optional_rational(self, attribute, value)

    @edge.validator
    def _edge_validator(self, attribute: attrs.Attribute, value: Any) -> None:
        preprocess.integer(value, attribute.name, lower_bound=0, is_none_valid=True)

    @vertex.validator
    def _vertex_validator(self, attribute: attrs.Attribute, value: Any) -> None:
        preprocess.integer(value, attribute.name, lower_bound=0, is_none_valid=True)

    @seed.validator
    def _seed_validator(self, attribute: attrs.Attribute, value: Any) -> None:
        preprocess.integer(value, attribute.name, is_none_valid=True)

    @samples.validator
    def _samples_validator(self, attribute: attrs.Attribute, value: Any) -> None:
        preprocess.integer(value, attribute.name, lower_bound=0, is_none_valid=True)

    @workers.validator
    def _workers_validator(self, attribute: attrs.Attribute, value: Any) -> None:
        preprocess.integer(value, attribute.name, lower_bound=1, is_none_valid=True)

    @full.validator
    def _full_validator(self, attribute: attrs.Attribute, value: Any) -> None:
        preprocess.validate_type(value, attribute.name, bool, is_none_valid=True)

    def patch_with(self, value: Any) -> Any:
        """Field by field merge; ``caps`` are merged field by field as well."""
        result = super().patch_with(value)
        if isinstance(value, RunConfig) and self.caps is not None and value.caps is not None:
            result = result.clone(caps=self.caps.patch_with(value.caps))
        return result

    def with_defaults(self) -> "RunConfig":
        """Fills every unset field that has a default; caps are resolved from the environment."""
        caps = self.caps if self.caps is not None else config.Caps()
        return self.patch_with(
            RunConfig(
                measure=MeasureKind.default(),
                p=DEFAULT_P,
                m=DEFAULT_FIGURE1_M,
                output_format=OutputFormat.default(),
                seed=DEFAULT_SEED,
                samples=DEFAULT_SAMPLES,
                workers=DEFAULT_WORKERS,
                rule=coupling.EdgeRule.LOWEST_INCIDENT,
                full=False,
            )
        ).clone(caps=caps.resolved())
