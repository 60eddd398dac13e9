# vim: ai:sw=4:ts=4:sta:et:fo=croql
# pylint: disable=missing-module-docstring,missing-class-docstring
# type: ignore
from fractions import Fraction
from typing import Any, Dict

import deepdiff
import pytest

from py_fuzzy_potts.dto import verdict


class TestVerdict:
    def test_ctor_ok_holds(self):
        # Given/When
        result = verdict.Verdict(check="plc", holds=True, checked=3)
        # Then
        assert result
        assert result.witness is None

    def test_ctor_ok_fails(self):
        # Given/When
        result = verdict.Verdict(check="plc", holds=False, checked=1, witness={"eta": 1, "tau": 2})
        # Then
        assert not result

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"check": "plc", "holds": True, "witness": {"eta": 1}},  # holds with a witness
            {"check": "plc", "holds": False},  # fails without a witness
            {"check": None, "holds": True},
            {"check": "plc", "holds": 1},
            {"check": "plc", "holds": True, "checked": "3"},
        ],
    )
    def test_ctor_nok(self, kwargs: Dict[str, Any]):
        with pytest.raises((ValueError, TypeError)):
            verdict.Verdict(**kwargs)

    def test_as_dict_ok_for_json(self):
        # Given
        obj = verdict.Verdict(
            check="lemma2", holds=False, checked=2, skipped=1, witness={"covariance": Fraction(-1, 14)}
        )
        # When
        result = obj.as_dict(for_json=True)
        # Then
        expected = {
            "check": "lemma2",
            "holds": False,
            "checked": 2,
            "skipped": 1,
            "witness": {"covariance": {"exact": "-1/14", "decimal": "-0.0714285714286"}},
            "details": None,
        }
        diff = deepdiff.DeepDiff(result, expected)
        assert not diff, diff
