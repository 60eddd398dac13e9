# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""
Report envelope and its JSON, CSV and text renderings.

A report is a JSON-ready :py:class:`dict`::
    {
        "schema_version": "1.0.0",
        "command": "check-pa",
        "input": {...},
        "result": {...}
    }

Rationals inside are ``{"exact": "a/b", "decimal": "..."}``, see :py:func:`exact.render`.
"""
import csv
import importlib.resources
import io
import json
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import attrs

from py_fuzzy_potts.common import const, exact, logger
from py_fuzzy_potts.dto import run_config

_LOGGER = logger.get(__name__)

SCHEMA_PACKAGE: str = "py_fuzzy_potts.schema"
SCHEMA_FILENAME: str = "report.schema.json"
FLAT_CSV_HEADER: Tuple[str, str, str] = ("field", "exact", "decimal")


@attrs.define(**{**const.ATTRS_DEFAULTS, "hash": False})  # type: ignore
class RunResult:
    """What a command produced."""

    exit_code: int = attrs.field(validator=attrs.validators.instance_of(int))
    report: Dict[str, Any] = attrs.field(validator=attrs.validators.instance_of(dict))
    rows: Optional[List[List[Any]]] = attrs.field(default=None)
    """
    CSV table, header first. Without it the CSV is the flattened report.
    """


def envelope(command: run_config.Command, inputs: Dict[str, Any], result: Any) -> Dict[str, Any]:
    """Builds the report around a command result; values are converted with :py:func:`exact.to_jsonable`."""
    return {
        "schema_version": const.REPORT_SCHEMA_VERSION,
        "command": command.value,
        "input": exact.to_jsonable(inputs),
        "result": exact.to_jsonable(result),
    }


def load_schema() -> Dict[str, Any]:
    """The JSON schema shipped with the package."""
    text = importlib.resources.files(SCHEMA_PACKAGE).joinpath(SCHEMA_FILENAME).read_text(const.ENCODING_UTF8)
    return json.loads(text)


def _is_rational(value: Any) -> bool:
    return isinstance(value, dict) and set(value) == {"exact", "decimal"}


def flatten(value: Any, prefix: str = "") -> Iterator[Tuple[str, Any]]:
    """
    ``(dotted path, leaf)`` pairs in key order; list items are addressed by index. Rationals are leaves.
    """
    if _is_rational(value) or not isinstance(value, (dict, list)):
        yield prefix, value
    elif isinstance(value, dict):
        for key in sorted(value):
            yield from flatten(value[key], f"{prefix}.{key}" if prefix else str(key))
    else:
        for ndx, item in enumerate(value):
            yield from flatten(item, f"{prefix}.{ndx}" if prefix else str(ndx))


def _scalar(value: Any) -> str:
    if value is None:
        result = ""
    elif isinstance(value, bool):
        result = "true" if value else "false"
    else:
        result = str(value)
    return result


def to_json(report: Dict[str, Any]) -> str:
    """Sorted keys, two space indent."""
    return json.dumps(report, sort_keys=True, indent=2)


def to_csv(report: Dict[str, Any], rows: Optional[Sequence[Sequence[Any]]] = None) -> str:
    """
    ``rows`` as given, rationals split into their exact and decimal columns by the caller.
    Otherwise one ``field,exact,decimal`` row per leaf of the report.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if rows is not None:
        writer.writerows([[_scalar(val) for val in row] for row in rows])
    else:
        writer.writerow(FLAT_CSV_HEADER)
        for key, val in flatten(report):
            if _is_rational(val):
                writer.writerow([key, val["exact"], val["decimal"]])
            else:
                writer.writerow([key, _scalar(val), ""])
    return buffer.getvalue()


def to_text(report: Dict[str, Any]) -> str:
    """One ``path: value`` line per leaf; rationals as ``a/b (decimal)``."""
    lines = []
    for key, val in flatten(report):
        shown = f"{val['exact']} ({val['decimal']})" if _is_rational(val) else _scalar(val)
        lines.append(f"{key}: {shown}")
    return "\n".join(lines) + "\n"


def render(result: RunResult, output_format: run_config.OutputFormat) -> str:
    """Text to write on stdout."""
    if output_format == run_config.OutputFormat.CSV:
        text = to_csv(result.report, result.rows)
    elif output_format == run_config.OutputFormat.TEXT:
        text = to_text(result.report)
    else:
        text = to_json(result.report) + "\n"
    return text


def rational_columns(value: Any) -> List[str]:
    """``[exact, decimal]`` for a rational, for CSV tables."""
    rendered = exact.render(value)
    return [rendered["exact"], rendered["decimal"]]
