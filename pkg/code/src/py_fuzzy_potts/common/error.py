# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""Errors raised by the library. A failed inequality is a verdict, not an error."""
from typing import Optional


class FuzzyPottsError(RuntimeError):
    """
    Aggregates all errors in :py:mod:`py_fuzzy_potts`.
    """


class SizeCapError(FuzzyPottsError):
    """
    The instance is larger than the exact-enumeration cap.
    """

    def __init__(self, cap_name: str, cap_value: int, actual: int, context: Optional[str] = None):
        self.cap_name = cap_name
        self.cap_value = cap_value
        self.actual = actual
        msg = f"Refusing exact enumeration: '{cap_name}' is {cap_value} but the instance needs {actual}"
        if context:
            msg = f"{msg} ({context})"
        super().__init__(msg)


class PreconditionError(FuzzyPottsError, ValueError):
    """
    An operation precondition does not hold, e.g. conditioning on a null event.
    """


class GraphParseError(FuzzyPottsError, ValueError):
    """
    Malformed graph text.
    """

    def __init__(self, line_number: int, line: str, reason: str):
        self.line_number = line_number
        super().__init__(f"Line {line_number}: {reason}. Got: '{line}'")


class VerificationError(FuzzyPottsError):
    """
    A property that must hold did not.
    """


def check_cap(cap_name: str, cap_value: int, actual: int, context: Optional[str] = None) -> None:
    """
    Raises :py:class:`SizeCapError` if ``actual > cap_value``.
    """
    if actual > cap_value:
        raise SizeCapError(cap_name, cap_value, actual, context)
