"""Corpus export/import: one {instruction, input, output} object per line."""

from __future__ import annotations

import json
from pathlib import Path


def export_corpus(samples, path: str | Path, format: str = "jsonl") -> Path:
    if format != "jsonl":
        raise ValueError(f"unsupported corpus format {format!r}")
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8") as fh:
            for sample in samples:
                record = sample.to_record() if hasattr(sample, "to_record") else dict(sample)
                fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
    except OSError as exc:
        raise IOError(f"cannot write corpus to {path}: {exc}") from exc
    return path


def load_corpus(path: str | Path) -> list[dict]:
    records = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))
    return records
