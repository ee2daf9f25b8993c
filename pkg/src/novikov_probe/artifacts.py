"""Report writing utilities."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any

from novikov_probe.novikov import NovikovNumbers

SCHEMA_VERSION = "1"
CSV_COLUMNS = ("degree", "betti", "torsion_plus", "torsion_minus", "chain_rank")


def render_json(payload: dict[str, Any]) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    document = {"schema_version": SCHEMA_VERSION, **payload}
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def write_report_json(path: Path, payload: dict[str, Any]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        handle.write(render_json(payload))
    return path


def numbers_table(numbers: NovikovNumbers) -> list[dict[str, object]]:
    """One row per degree; torsion cells are empty when not computed."""
    plus = numbers.torsion_counts(1)
    minus = numbers.torsion_counts(-1)
    return [
        {
            "degree": degree,
            "betti": betti,
            "torsion_plus": "" if plus is None else plus[degree],
            "torsion_minus": "" if minus is None else minus[degree],
            "chain_rank": numbers.chain_ranks[degree],
        }
        for degree, betti in enumerate(numbers.betti)
    ]


def write_csv(path: Path, numbers: NovikovNumbers) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(numbers_table(numbers))
    return path
