"""Stable JSON / CSV / text rendering of command results.

A result document is an ordered dict.  An optional ``table`` entry
(``{"columns": [...], "rows": [[...], ...]}``) is what CSV output prints;
documents without a table print as ``key,value`` lines.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any

SCHEMA = "forge/1"


def document(command: str, **fields: Any) -> dict[str, Any]:
    doc: dict[str, Any] = {"schema": SCHEMA, "command": command}
    doc.update(fields)
    return doc


def _flatten(prefix: str, value: Any, out: list[tuple[str, Any]]) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(value, list) and value and all(isinstance(x, dict) for x in value):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, value))


def _scalar(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (list, tuple)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def emit_report(doc: dict[str, Any], fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        table = doc.get("table")
        if table:
            w.writerow(table["columns"])
            for row in table["rows"]:
                w.writerow([_scalar(x) for x in row])
        else:
            w.writerow(["key", "value"])
            rows: list[tuple[str, Any]] = []
            _flatten("", {k: v for k, v in doc.items() if k != "table"}, rows)
            for k, v in rows:
                w.writerow([k, _scalar(v)])
        return buf.getvalue()
    if fmt == "text":
        for key in ("formula", "text"):
            if key in doc:
                return str(doc[key]).rstrip("\n") + "\n"
        rows = []
        _flatten("", {k: v for k, v in doc.items() if k not in ("table", "schema")}, rows)
        lines = [f"{k}: {_scalar(v)}" for k, v in rows]
        table = doc.get("table")
        if table:
            lines.append("  ".join(table["columns"]))
            lines.extend("  ".join(_scalar(x) for x in row) for row in table["rows"])
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown output format {fmt!r}")
