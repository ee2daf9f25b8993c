"""Compute numbers and certificates for every corpus entry."""

from __future__ import annotations

from pathlib import Path
import sys

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from novikov_probe.artifacts import write_report_json
from novikov_probe.certify import certify
from novikov_probe.corpus import load_corpus
from novikov_probe.novikov import compute_numbers
from novikov_probe.options import EngineOptions


def main() -> None:
    out_dir = Path("artifacts") / "corpus"
    options = EngineOptions(torsion=True)
    for entry in load_corpus():
        pres = entry.presentation()
        xi = entry.character(pres)
        complex_ = entry.complex()
        numbers = compute_numbers(complex_, options)
        cert = certify(pres, xi, numbers)
        write_report_json(
            out_dir / f"{entry.name}.json",
            {
                "name": entry.name,
                "betti": list(numbers.betti),
                "torsion_plus": numbers.torsion_counts(1),
                "torsion_minus": numbers.torsion_counts(-1),
                "certificate": cert.as_json(),
            },
        )
        print(
            f"{entry.title}: betti {list(numbers.betti)},"
            f" q+ {numbers.torsion_counts(1)}, q- {numbers.torsion_counts(-1)},"
            f" {cert.verdict}"
        )


if __name__ == "__main__":
    main()
