"""Dataset ingestion (JSONL/CSV) and prompt templating."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from textprobe.errors import ConfigError, DatasetParseError

PLACEHOLDER = "{example}"


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    text: str
    label: str


def _auto_id(row_number: int) -> str:
    return f"{row_number:06d}"


def _load_jsonl(path: Path) -> list[DatasetRecord]:
    records = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetParseError(f"{path}:{lineno}: {exc}") from exc
            text = data.get("text")
            label = data.get("label")
            if not text or not label:
                raise DatasetParseError(
                    f"{path}:{lineno}: record needs non-empty text and label"
                )
            records.append(
                DatasetRecord(
                    id=str(data.get("id") or _auto_id(lineno)),
                    text=str(text),
                    label=str(label),
                )
            )
    return records


def _load_csv(path: Path) -> list[DatasetRecord]:
    records = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or not {"text", "label"} <= set(
            reader.fieldnames
        ):
            raise DatasetParseError(f"{path}:1: header must include text,label")
        for row_number, row in enumerate(reader, start=1):
            text = row.get("text")
            label = row.get("label")
            if not text or not label:
                raise DatasetParseError(
                    f"{path}:{reader.line_num}: row needs non-empty text and label"
                )
            records.append(
                DatasetRecord(
                    id=str(row.get("id") or _auto_id(row_number)),
                    text=text,
                    label=label,
                )
            )
    return records


def load_dataset(path: str | Path, format: str = "jsonl") -> list[DatasetRecord]:
    """Read records in file order; missing ids become zero-padded row numbers."""
    path = Path(path)
    if not path.is_file():
        raise DatasetParseError(f"{path}: file not found")
    if format == "jsonl":
        records = _load_jsonl(path)
    elif format == "csv":
        records = _load_csv(path)
    else:
        raise ConfigError(f"unknown dataset format {format!r}")
    seen: set[str] = set()
    for record in records:
        if record.id in seen:
            raise DatasetParseError(f"{path}: duplicate id {record.id!r}")
        seen.add(record.id)
    return records


def render_input(template: str, example: str) -> str:
    """Substitute the example into the prompt template, single pass."""
    if PLACEHOLDER not in template:
        raise ConfigError(f"prompt template must contain {PLACEHOLDER}")
    return template.replace(PLACEHOLDER, example)


def example_span(template: str, example: str) -> tuple[int, int]:
    """Byte span of the (first) substituted example in the rendered text."""
    if PLACEHOLDER not in template:
        raise ConfigError(f"prompt template must contain {PLACEHOLDER}")
    prefix = template.split(PLACEHOLDER, 1)[0]
    start = len(prefix.encode("utf-8"))
    return start, start + len(example.encode("utf-8"))
