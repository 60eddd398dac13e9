# vim: ai:sw=4:ts=4:sta:et:fo=croql
# pylint: disable=missing-module-docstring,missing-class-docstring
# type: ignore
import pathlib
from typing import Any, Dict

import pytest

from py_fuzzy_potts import coupling
from py_fuzzy_potts.common import config, const
from py_fuzzy_potts.dto import run_config

_TEST_DATA_DIR: pathlib.Path = pathlib.Path(__file__).parent.parent.parent.parent / "test_data"
_TEST_CONFIG_FILE: pathlib.Path = _TEST_DATA_DIR / "config" / "config.json"


class TestEnums:
    @pytest.mark.parametrize(
        "cls,value,expected",
        [
            (run_config.Command, "CHECK-PA", run_config.Command.CHECK_PA),
            (run_config.Command, "es-check", run_config.Command.ES_CHECK),
            (run_config.OutputFormat, "Csv", run_config.OutputFormat.CSV),
            (run_config.MeasureKind, "uniform-forest", run_config.MeasureKind.UNIFORM_FOREST),
            (run_config.MeasureKind, "forest", None),
        ],
    )
    def test_from_str(self, cls: type, value: str, expected: Any):
        assert cls.from_str(value) == expected

    def test_command_count(self):
        assert len(run_config.Command.values()) == 10


class TestRunConfig:
    def test_ctor_ok_empty(self):
        assert run_config.RunConfig().is_empty()

    @pytest.mark.parametrize(
        "value,expected",
        [
            ("1/2", "1/2"),
            ("1/2, 1/3", ["1/2", "1/3"]),
            (("1/2", 1), ["1/2", 1]),
            (["1/4"], ["1/4"]),
        ],
    )
    def test_p_converter(self, value: Any, expected: Any):
        assert run_config.RunConfig(p=value).p == expected

    def test_q_values_converter(self):
        assert run_config.RunConfig(q_values="1/2,3/4,").q_values == ["1/2", "3/4"]

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"q": "0.5"},
            {"alpha": 0.5},
            {"p": "1/2,x"},
            {"q_values": "1/2,1/0"},
            {"size": 0},
            {"m": 0},
            {"edge": -1},
            {"workers": 0},
            {"samples": -1},
            {"full": "yes"},
            {"command": "check-pa"},
            {"caps": {"max_edges": 3}},
        ],
    )
    def test_ctor_nok(self, kwargs: Dict[str, Any]):
        with pytest.raises((ValueError, TypeError)):
            run_config.RunConfig(**kwargs)

    def test_from_json_ok_file(self):
        # Given
        with open(_TEST_CONFIG_FILE, encoding=const.ENCODING_UTF8) as in_file:
            content = in_file.read()
        # When
        result = run_config.RunConfig.from_json(content)
        # Then
        assert result.command == run_config.Command.CHECK_PA
        assert result.family == "cycle"
        assert result.size == 4
        assert result.caps == config.Caps(max_edges=12, max_pa_vertices=4)

    def test_from_json_ok_round_trip_enums(self):
        # Given
        obj = run_config.RunConfig(
            command=run_config.Command.COUPLE,
            rule=coupling.EdgeRule.HIGHEST_INCIDENT,
            output_format=run_config.OutputFormat.TEXT,
            p=["1/2", "1/3"],
        )
        # When
        result = run_config.RunConfig.from_json(obj.as_json())
        # Then
        assert result == obj

    def test_patch_with_ok_command_line_wins(self):
        # Given
        base = run_config.RunConfig(family="cycle", size=4, q="2", caps=config.Caps(max_edges=12, max_pa_vertices=4))
        override = run_config.RunConfig(size=5, caps=config.Caps(max_edges=6))
        # When
        result = override.patch_with(base)
        # Then
        assert result.family == "cycle"
        assert result.size == 5
        assert result.q == "2"
        assert result.caps == config.Caps(max_edges=6, max_pa_vertices=4)

    def test_with_defaults_ok(self, monkeypatch):
        # Given
        monkeypatch.delenv(const.MAX_EDGES_ENV_VAR_NAME, raising=False)
        obj = run_config.RunConfig(command=run_config.Command.MEASURE, seed=7)
        # When
        result = obj.with_defaults()
        # Then
        assert result.seed == 7
        assert result.p == run_config.DEFAULT_P
        assert result.q is None
        assert result.measure == run_config.MeasureKind.RANDOM_CLUSTER
        assert result.output_format == run_config.OutputFormat.JSON
        assert result.rule == coupling.EdgeRule.LOWEST_INCIDENT
        assert result.full is False
        assert result.caps.max_edges == const.DEFAULT_MAX_EDGES
