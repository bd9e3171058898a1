"""CSV / JSON serialization of run results.

Floats in CSV payloads are written with 17 significant digits, which
round-trips every 64-bit float; JSON uses Python's shortest round-trip
repr, so both formats parse back to identical values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Sequence

METADATA_PREFIX = "# metadata: "


def format_float(x: float) -> str:
    return f"{float(x):.16e}"


@dataclass
class OutputRecord:
    metadata: dict[str, Any]
    columns: list[str]
    rows: list[list[float]] = field(default_factory=list)
    summary: list[str] = field(default_factory=list)
    exit_status: int = 0

    def payload_csv(self) -> str:
        lines = [",".join(self.columns)]
        lines.extend(",".join(format_float(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        meta = json.dumps(self.metadata, sort_keys=True, allow_nan=False)
        return f"{METADATA_PREFIX}{meta}\n" + self.payload_csv()

    def to_json(self) -> str:
        doc = {
            "metadata": self.metadata,
            "columns": self.columns,
            "rows": [[float(v) for v in row] for row in self.rows],
        }
        return json.dumps(doc, sort_keys=True, indent=1, allow_nan=False) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()


def parse_csv(text: str) -> tuple[dict[str, Any], list[str], list[list[float]]]:
    lines = text.splitlines()
    if not lines or not lines[0].startswith(METADATA_PREFIX):
        raise ValueError("missing metadata line")
    metadata = json.loads(lines[0][len(METADATA_PREFIX):])
    columns = lines[1].split(",")
    rows = [[float(v) for v in line.split(",")] for line in lines[2:] if line]
    return metadata, columns, rows


def parse_json(text: str) -> tuple[dict[str, Any], list[str], list[list[float]]]:
    doc = json.loads(text)
    return doc["metadata"], doc["columns"], doc["rows"]


def parse_output(text: str) -> tuple[dict[str, Any], list[str], list[list[float]]]:
    return parse_json(text) if text.lstrip().startswith("{") else parse_csv(text)


def column(columns: Sequence[str], rows: Sequence[Sequence[float]], name: str) -> list[float]:
    i = list(columns).index(name)
    return [row[i] for row in rows]
