"""Bundled corpus of presentations with expected outputs, and the selftest."""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import replace
from importlib import resources
import json
import logging
from typing import Any

from novikov_probe.certify import amenability_from_entries
from novikov_probe.certify import certify
from novikov_probe.certify import scan_classes
from novikov_probe.chain import BoundaryComplex
from novikov_probe.chain import dump_complex
from novikov_probe.chain import load_complex
from novikov_probe.fox import assemble_presentation_complex
from novikov_probe.linalg import minors
from novikov_probe.novikov import compute_numbers
from novikov_probe.novikov import gcd_is_unit
from novikov_probe.novikov import generic_dims
from novikov_probe.novikov import truncated_bezout_exists
from novikov_probe.options import DEFAULT_SCAN_BUDGET
from novikov_probe.options import EngineOptions
from novikov_probe.presentation import CharacterClass
from novikov_probe.presentation import Presentation
from novikov_probe.presentation import parse_presentation
from novikov_probe.presentation import rows_from_json
from novikov_probe.presentation import validate_character

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    title: str
    presentation_text: str
    assignment: dict[str, Any]
    amenable: bool
    expected: dict[str, Any]

    @classmethod
    def from_json(cls, document: dict[str, Any]) -> "CorpusEntry":
        return cls(
            name=document["name"],
            title=document.get("title", document["name"]),
            presentation_text=document["presentation"],
            assignment=dict(document["class"]),
            amenable=bool(document.get("amenable", False)),
            expected=dict(document["expected"]),
        )

    def presentation(self) -> Presentation:
        return parse_presentation(self.presentation_text)

    def character(self, presentation: Presentation | None = None) -> CharacterClass:
        pres = presentation if presentation is not None else self.presentation()
        return validate_character(pres, rows_from_json(pres, [self.assignment]))

    def complex(self) -> BoundaryComplex:
        pres = self.presentation()
        return assemble_presentation_complex(pres, self.character(pres))


def load_corpus() -> list[CorpusEntry]:
    """Corpus entries in file-name order."""
    folder = resources.files("novikov_probe") / "data" / "corpus"
    entries = []
    for item in sorted(folder.iterdir(), key=lambda path: path.name):
        if item.name.endswith(".json"):
            entries.append(CorpusEntry.from_json(json.loads(item.read_text("utf-8"))))
    return entries


def corpus_entry(name: str) -> CorpusEntry:
    for entry in load_corpus():
        if entry.name == name:
            return entry
    raise KeyError(f"no corpus entry named {name!r}")


def _diff(name: str, key: str, got: object, want: object) -> str | None:
    if got == want:
        return None
    return f"{name}: {key} = {got!r}, expected {want!r}"


def _bezout_mismatches(entry: CorpusEntry, complex_: BoundaryComplex) -> list[str]:
    problems = []
    for k, matrix in enumerate(complex_.boundaries, start=1):
        elements = minors(matrix, 1)
        if not elements:
            continue
        for direction in (1, -1):
            criterion = gcd_is_unit(elements, direction)
            oracle = truncated_bezout_exists(elements, direction)
            if criterion != oracle:
                problems.append(
                    f"{entry.name}: d{k} direction {direction:+d}: unit criterion"
                    f" says {criterion}, Bezout search says {oracle}"
                )
    return problems


def check_entry(entry: CorpusEntry, options: EngineOptions | None = None) -> list[str]:
    """Recompute one corpus entry; returns human-readable differences."""
    opts = replace(options if options is not None else EngineOptions(), torsion=True)
    presentation = entry.presentation()
    xi = entry.character(presentation)
    complex_ = assemble_presentation_complex(presentation, xi)
    numbers = compute_numbers(complex_, opts)
    sampled = generic_dims(complex_, opts.samples, opts.seed, opts)
    cert = certify(presentation, xi, numbers)

    want = entry.expected
    checks = [
        ("betti", list(numbers.betti), want["betti"]),
        ("torsion_plus", numbers.torsion_counts(1), want["torsion_plus"]),
        ("torsion_minus", numbers.torsion_counts(-1), want["torsion_minus"]),
        ("euler", numbers.euler, want["euler"]),
        ("deficiency", presentation.deficiency, want["deficiency"]),
        ("generic_dims", list(sampled.dims), want["generic_dims"]),
        ("verdict", cert.verdict, want["verdict"]),
        ("routes", cert.route_names, want["routes"]),
        ("round_trip", load_complex(dump_complex(complex_)) == complex_, True),
    ]
    problems = [
        problem
        for key, got, expected in checks
        if (problem := _diff(entry.name, key, got, expected)) is not None
    ]

    for sample in sampled.samples:
        if any(h < b for h, b in zip(sample.dims, numbers.betti)):
            problems.append(f"{entry.name}: sample {sample.point} below betti")

    if entry.amenable:
        scan = scan_classes(
            presentation, DEFAULT_SCAN_BUDGET, opts.seed, replace(opts, torsion=False)
        )
        report = amenability_from_entries(presentation, scan)
        if not report.passed:
            problems.append(f"{entry.name}: amenability consistency failed")

    problems.extend(_bezout_mismatches(entry, complex_))
    return problems


def run_selftest(options: EngineOptions | None = None) -> list[str]:
    """Recompute the whole corpus; an empty list means every entry matched."""
    problems: list[str] = []
    for entry in load_corpus():
        found = check_entry(entry, options)
        LOGGER.info("selftest %s: %s", entry.name, "ok" if not found else "MISMATCH")
        for problem in found:
            LOGGER.warning(problem)
        problems.extend(found)
    return problems
