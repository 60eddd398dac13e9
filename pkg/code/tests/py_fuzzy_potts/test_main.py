# vim: ai:sw=4:ts=4:sta:et:fo=croql
# pylint: disable=missing-module-docstring,missing-class-docstring,attribute-defined-outside-init
# type: ignore
import json
import pathlib
import sys
from typing import List

import pytest
from click import testing

from py_fuzzy_potts import __main__ as main_mod
from py_fuzzy_potts import runner
from py_fuzzy_potts.common import const
from py_fuzzy_potts.dto import run_config

_TEST_DATA_DIR: pathlib.Path = pathlib.Path(__file__).parent.parent.parent / "test_data"


@pytest.fixture(autouse=True)
def _no_cap_env(monkeypatch):
    for name in (const.MAX_EDGES_ENV_VAR_NAME, const.MAX_PA_VERTICES_ENV_VAR_NAME, const.MAX_JOINT_BITS_ENV_VAR_NAME):
        monkeypatch.delenv(name, raising=False)


def _invoke(args: List[str]) -> testing.Result:
    return testing.CliRunner().invoke(main_mod.cli, args)


def test_help_lists_commands():
    # Given/When
    result = _invoke(["--help"])
    # Then
    assert result.exit_code == 0
    for command in run_config.Command:
        assert command.value in result.output


def test_figure1_m_1():
    # Given/When
    result = _invoke(["figure1", "--m", "1"])
    # Then
    assert result.exit_code == runner.EXIT_OK, result.output
    assert json.loads(result.output)["result"]["analysis"]["covariance"] == {
        "exact": "5/49",
        "decimal": "0.102040816327",
    }


def test_figure1_closed_form_negative():
    # Given/When
    result = _invoke(["figure1", "--m", "8"])
    # Then
    assert result.exit_code == runner.EXIT_OK, result.output
    assert json.loads(result.output)["result"]["analysis"]["sign"] == -1


@pytest.mark.slow
def test_figure1_m_7_enumerated():
    # Given/When
    result = _invoke(["figure1", "--m", "7"])
    # Then
    analysis = json.loads(result.output)["result"]["analysis"]
    assert analysis["brute_force"]
    assert analysis["covariance"]["exact"].startswith("-")


@pytest.mark.parametrize(
    "args,exit_code",
    [
        (["--family", "figure1", "--m", "1", "--q", "2", "--alpha", "1/2"], runner.EXIT_OK),
        (["--family", "figure1", "--m", "1", "--measure", "uniform-forest"], runner.EXIT_FAILURE),
        (["--config-file", str(_TEST_DATA_DIR / "config" / "config.json"), "--size", "3"], runner.EXIT_OK),
    ],
)
def test_check_pa(args: List[str], exit_code: int):
    # Given/When
    result = _invoke(["check-pa"] + args)
    # Then
    assert result.exit_code == exit_code, result.output


def test_check_pa_refused():
    # Given/When
    result = _invoke(["check-pa", "--family", "path", "--size", "6", "--alpha", "1/2"])
    # Then
    assert result.exit_code == runner.EXIT_FAILURE
    assert "Refused" in result.output
    assert "max_pa_vertices" in result.output


@pytest.mark.parametrize(
    "args",
    [
        ["measure", "--family", "complete", "--size", "2", "--p", "3/2"],
        ["measure", "--family", "complete", "--size", "2", "--q", "0.5"],
        ["measure"],
        ["measure", "--graph-file", str(_TEST_DATA_DIR / "graphs" / "bad_edge.txt")],
    ],
)
def test_bad_input(args: List[str]):
    # Given/When
    result = _invoke(args)
    # Then
    assert result.exit_code == runner.EXIT_FAILURE
    assert "Error:" in result.output


@pytest.mark.parametrize(
    "output_format,first_line",
    [
        ("csv", "rank,exact,decimal"),
        ("text", "command: measure"),
        ("json", "{"),
    ],
)
def test_measure_formats(output_format: str, first_line: str):
    # Given/When
    result = _invoke(
        [
            "measure",
            "--graph-file",
            str(_TEST_DATA_DIR / "graphs" / "triangle.txt"),
            "--q",
            "2",
            "--format",
            output_format,
        ]
    )
    # Then
    assert result.exit_code == runner.EXIT_OK, result.output
    assert result.output.splitlines()[0] == first_line


def test_probe_q_single_graph():
    # Given/When
    result = _invoke(
        [
            "probe-q",
            "--family",
            "complete",
            "--size",
            "2",
            "--q-values",
            "1/4,1/2",
            "--p-values",
            "1/2",
            "--alpha-values",
            "1/2",
        ]
    )
    # Then
    assert result.exit_code == runner.EXIT_OK, result.output
    assert len(json.loads(result.output)["result"]["cells"]) == 2


def test_couple_csv():
    # Given/When
    result = _invoke(["couple", "--family", "complete", "--size", "2", "--q", "2", "--format", "csv"])
    # Then
    assert result.exit_code == runner.EXIT_OK, result.output
    assert result.output.splitlines() == ["leaf,psi,xi,exact,decimal", "0,1,0,1,1"]


def test_main_usage_error_exits_1(monkeypatch):
    # Given
    monkeypatch.setattr(sys, "argv", ["py-fuzzy-potts", "measure", "--format", "yaml"])
    # When
    with pytest.raises(SystemExit) as err:
        main_mod.main()
    # Then
    assert err.value.code == runner.EXIT_FAILURE
