# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""Outcome of an exhaustive check."""
from typing import Any, Dict, Optional

import attrs

from py_fuzzy_potts.common import const, dto_defaults


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class Verdict(dto_defaults.HasFromJsonString):
    """
    ``holds`` is exact. ``witness`` is the first failing instance in the check's deterministic order,
    :py:obj:`None` when the property holds.
    """

    check: str = attrs.field(validator=attrs.validators.instance_of(str))
    """
    Name of the check, e.g. ``"plc"``.
    """
    holds: bool = attrs.field(validator=attrs.validators.instance_of(bool))
    checked: int = attrs.field(default=0, validator=attrs.validators.instance_of(int))
    """
    How many instances were compared (vacuous ones excluded).
    """
    skipped: int = attrs.field(default=0, validator=attrs.validators.instance_of(int))
    """
    Instances skipped because a conditioning event is null.
    """
    witness: Optional[Dict[str, Any]] = attrs.field(
        default=None, validator=attrs.validators.optional(attrs.validators.instance_of(dict))
    )
    details: Optional[Dict[str, Any]] = attrs.field(
        default=None, validator=attrs.validators.optional(attrs.validators.instance_of(dict))
    )

    def __attrs_post_init__(self):
        if self.holds and self.witness is not None:
            raise ValueError(f"A check that holds cannot carry a witness. Got: {self}")
        if not self.holds and self.witness is None:
            raise ValueError(f"A failed check must carry a witness. Got: {self}")

    def __bool__(self) -> bool:
        return self.holds
