# vim: ai:sw=4:ts=4:sta:et:fo=croql
# pylint: disable=missing-module-docstring,missing-class-docstring,attribute-defined-outside-init
# type: ignore
from typing import Any, Dict

import pytest

from py_fuzzy_potts.common import config, const, error


class TestCaps:
    def test_ctor_ok_empty(self):
        # Given/When
        result = config.Caps()
        # Then
        assert result.is_empty()

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"max_edges": -1},
            {"max_pa_vertices": const.HARD_MAX_PA_VERTICES + 1},
            {"max_joint_bits": "24"},
            {"max_edges": True},
        ],
    )
    def test_ctor_nok(self, kwargs: Dict[str, Any]):
        # Given/When
        with pytest.raises(Exception):
            config.Caps(**kwargs)

    def test_from_env_ok_defaults(self, monkeypatch):
        # Given
        for name in (
            const.MAX_EDGES_ENV_VAR_NAME,
            const.MAX_PA_VERTICES_ENV_VAR_NAME,
            const.MAX_JOINT_BITS_ENV_VAR_NAME,
        ):
            monkeypatch.delenv(name, raising=False)
        # When
        result = config.Caps.from_env()
        # Then
        assert result.max_edges == const.DEFAULT_MAX_EDGES
        assert result.max_pa_vertices == const.DEFAULT_MAX_PA_VERTICES
        assert result.max_joint_bits == const.DEFAULT_MAX_JOINT_BITS

    def test_from_env_ok_override(self, monkeypatch):
        # Given
        monkeypatch.setenv(const.MAX_EDGES_ENV_VAR_NAME, " 7 ")
        # When
        result = config.Caps.from_env()
        # Then
        assert result.max_edges == 7

    def test_from_env_nok(self, monkeypatch):
        # Given
        monkeypatch.setenv(const.MAX_EDGES_ENV_VAR_NAME, "many")
        # When/Then
        with pytest.raises(ValueError):
            config.Caps.from_env()

    def test_resolved_ok_keeps_explicit(self, monkeypatch):
        # Given
        monkeypatch.setenv(const.MAX_EDGES_ENV_VAR_NAME, "9")
        obj = config.Caps(max_edges=3)
        # When
        result = obj.resolved()
        # Then
        assert result.max_edges == 3
        assert result.max_pa_vertices is not None

    @pytest.mark.parametrize(
        "cap,actual,is_error",
        [
            (3, 2, False),
            (3, 3, False),
            (3, 4, True),
        ],
    )
    def test_check_edges(self, cap: int, actual: int, is_error: bool):
        # Given
        obj = config.Caps(max_edges=cap)
        # When
        try:
            obj.check_edges(actual, "test")
            raised = False
        except error.SizeCapError as err:
            raised = True
            assert err.cap_name == "max_edges"
            assert err.cap_value == cap
            assert err.actual == actual
            assert "test" in str(err)
        # Then
        assert raised is is_error

    def test_check_pa_vertices_nok(self):
        with pytest.raises(error.SizeCapError):
            config.Caps(max_pa_vertices=2).check_pa_vertices(3)

    def test_check_joint_bits_nok(self):
        with pytest.raises(error.SizeCapError):
            config.Caps(max_joint_bits=4).check_joint_bits(5)

    def test_json_ok(self):
        # Given
        obj = config.Caps(max_edges=12, max_pa_vertices=4)
        # When
        result = config.Caps.from_json(obj.as_json())
        # Then
        assert result == obj
