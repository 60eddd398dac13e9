# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""
Product order on ``{0, 1}^n`` with configurations as bit masks: ``a <= b`` iff ``a & ~b == 0``,
meet is ``a & b`` and join is ``a | b``.
"""
from fractions import Fraction
from typing import Iterator, Sequence

from py_fuzzy_potts.common import logger
from py_fuzzy_potts.dto import verdict

_LOGGER = logger.get(__name__)


def is_below(lower: int, upper: int) -> bool:
    """Coordinatewise ``lower <= upper``."""
    return lower & ~upper == 0


def submasks(mask: int) -> Iterator[int]:
    """All ``sub <= mask``, in increasing order."""
    subs = []
    sub = mask
    while True:
        subs.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    return reversed(subs)


def lattice_condition(prob: Sequence[Fraction], *, check: str = "plc") -> verdict.Verdict:
    """
    Exhaustive ``mu(a) mu(b) <= mu(a & b) mu(a | b)`` over incomparable pairs ``a < b`` (comparable
    pairs hold with equality).

    Args:
        prob: table indexed by mask, length ``2^n``.
        check: name reported in the verdict.

    Returns:
        Verdict whose witness is the failing pair with the smallest ``(a, b)``.
    """
    size = len(prob)
    checked = 0
    for low in range(size):
        p_low = prob[low]
        for high in range(low + 1, size):
            meet, join = low & high, low | high
            if meet in (low, high):
                continue
            checked += 1
            lhs = p_low * prob[high]
            rhs = prob[meet] * prob[join]
            if lhs > rhs:
                _LOGGER.debug("Lattice condition fails at (%d, %d): %s > %s", low, high, lhs, rhs)
                return verdict.Verdict(
                    check=check,
                    holds=False,
                    checked=checked,
                    witness={"eta": low, "tau": high, "product": lhs, "meet_join_product": rhs},
                )
    return verdict.Verdict(check=check, holds=True, checked=checked)
