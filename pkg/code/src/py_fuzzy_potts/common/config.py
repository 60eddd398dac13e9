# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""Enumeration caps. Every exact operation refuses inputs above these instead of sampling."""
import os
from typing import Any, Optional

import attrs

from py_fuzzy_potts.common import const, dto_defaults, error, preprocess


@attrs.define(**const.ATTRS_DEFAULTS)  # type: ignore
class Caps(dto_defaults.HasFromJsonString):
    """Size limits for exact enumeration."""

    max_edges: Optional[int] = attrs.field(default=None)
    """
    Largest ``|E|`` for dense edge tables, i.e. ``2^|E|`` configurations.
    """
    max_pa_vertices: Optional[int] = attrs.field(default=None)
    """
    Largest coordinate count for the all up-set pairs association check.
    Cannot exceed :py:data:`const.HARD_MAX_PA_VERTICES`.
    """
    max_joint_bits: Optional[int] = attrs.field(default=None)
    """
    Largest ``|E| + |V| * log2(|colors|)`` for joint edge/spin tables.
    """

    @max_edges.validator
    def _max_edges_validator(self, attribute: attrs.Attribute, value: Any) -> None:
        preprocess.integer(value, attribute.name, lower_bound=0, is_none_valid=True)

    @max_pa_vertices.validator
    def _max_pa_vertices_validator(self, attribute: attrs.Attribute, value: Any) -> None:
        preprocess.integer(
            value, attribute.name, lower_bound=0, upper_bound=const.HARD_MAX_PA_VERTICES, is_none_valid=True
        )

    @max_joint_bits.validator
    def _max_joint_bits_validator(self, attribute: attrs.Attribute, value: Any) -> None:
        preprocess.integer(value, attribute.name, lower_bound=0, is_none_valid=True)

    @classmethod
    def from_env(cls) -> "Caps":
        """
        Defaults, overridden by the environment variables
        :py:data:`const.MAX_EDGES_ENV_VAR_NAME`, :py:data:`const.MAX_PA_VERTICES_ENV_VAR_NAME` and
        :py:data:`const.MAX_JOINT_BITS_ENV_VAR_NAME`.
        """
        return Caps(
            max_edges=_env_int(const.MAX_EDGES_ENV_VAR_NAME, const.DEFAULT_MAX_EDGES),
            max_pa_vertices=_env_int(const.MAX_PA_VERTICES_ENV_VAR_NAME, const.DEFAULT_MAX_PA_VERTICES),
            max_joint_bits=_env_int(const.MAX_JOINT_BITS_ENV_VAR_NAME, const.DEFAULT_MAX_JOINT_BITS),
        )

    def resolved(self) -> "Caps":
        """Fills the :py:obj:`None` fields from :py:meth:`from_env`."""
        return self.patch_with(Caps.from_env())

    def check_edges(self, edge_count: int, context: Optional[str] = None) -> None:
        """Raises :py:class:`error.SizeCapError` if ``edge_count`` is too large."""
        error.check_cap("max_edges", self.resolved().max_edges, edge_count, context)  # type: ignore

    def check_pa_vertices(self, coordinate_count: int, context: Optional[str] = None) -> None:
        """Raises :py:class:`error.SizeCapError` if ``coordinate_count`` is too large."""
        error.check_cap("max_pa_vertices", self.resolved().max_pa_vertices, coordinate_count, context)  # type: ignore

    def check_joint_bits(self, bits: int, context: Optional[str] = None) -> None:
        """Raises :py:class:`error.SizeCapError` if ``bits`` is too large."""
        error.check_cap("max_joint_bits", self.resolved().max_joint_bits, bits, context)  # type: ignore


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    result = default
    if value is not None and value.strip():
        try:
            result = int(value.strip())
        except ValueError as err:
            raise ValueError(f"Environment variable '{name}' must be an integer. Got: '{value}'") from err
    return result


DEFAULT_CAPS: Caps = Caps()
"""Empty caps, i.e. resolved from the environment at check time."""
