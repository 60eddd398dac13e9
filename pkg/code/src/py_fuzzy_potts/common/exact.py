# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""
Rendering of exact rationals. The ``"a/b"`` string is authoritative; the decimal is for humans.
"""
import decimal
import enum
from fractions import Fraction
from typing import Any, Dict

from py_fuzzy_potts.common import const

_DECIMAL_CONTEXT: decimal.Context = decimal.Context(prec=const.DECIMAL_SIGNIFICANT_DIGITS)


def exact_str(value: Fraction) -> str:
    """
    ``"a/b"`` in lowest terms, or ``"a"`` for integers::
        exact_str(Fraction(2, 4))  # "1/2"
    """
    return str(Fraction(value))


def decimal_str(value: Fraction) -> str:
    """
    Decimal rendering with :py:data:`const.DECIMAL_SIGNIFICANT_DIGITS` significant digits.
    """
    value = Fraction(value)
    result = _DECIMAL_CONTEXT.divide(decimal.Decimal(value.numerator), decimal.Decimal(value.denominator))
    return str(result)


def render(value: Fraction) -> Dict[str, str]:
    """
    JSON form of a rational::
        {"exact": "5/49", "decimal": "0.102040816327"}
    """
    return {"exact": exact_str(value), "decimal": decimal_str(value)}


def to_jsonable(value: Any) -> Any:
    """
    Recursively replaces :py:class:`Fraction` by :py:func:`render` output and tuples by lists.
    Dictionary keys that are not strings are converted with :py:class:`str`.
    """
    if isinstance(value, bool) or value is None:
        result = value
    elif isinstance(value, Fraction):
        result = render(value)
    elif isinstance(value, dict):
        result = {str(key): to_jsonable(val) for key, val in value.items()}
    elif isinstance(value, (list, tuple)):
        result = [to_jsonable(val) for val in value]
    elif isinstance(value, enum.Enum):
        result = value.value
    else:
        result = value
    return result
