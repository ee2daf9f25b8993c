"""Free-subgroup certificates, amenability consistency and class scans."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Any
from typing import Sequence
import warnings

import numpy as np

from novikov_probe.errors import InputError
from novikov_probe.errors import NoClass
from novikov_probe.fox import assemble_presentation_complex
from novikov_probe.novikov import NovikovNumbers
from novikov_probe.novikov import compute_numbers
from novikov_probe.options import EngineOptions
from novikov_probe.presentation import CharacterClass
from novikov_probe.presentation import Presentation
from novikov_probe.presentation import format_presentation
from novikov_probe.presentation import parse_presentation
from novikov_probe.presentation import primitive_row
from novikov_probe.presentation import validate_character

LOGGER = logging.getLogger(__name__)

FREE_SUBGROUP_PRESENT = "FREE_SUBGROUP_PRESENT"
INCONCLUSIVE = "INCONCLUSIVE"

ROUTE_NOVIKOV_B1 = "novikov-b1"
ROUTE_EULER = "euler-2complex"
ROUTE_DEFICIENCY = "deficiency"

SCAN_COEFFICIENT_RANGE = 3
SCAN_ATTEMPTS_PER_CLASS = 50

TORSION_NOTE = (
    "Novikov torsion is reported for information only and never certifies a"
    " free subgroup: BS(1,2) = <a,b | a b a^-1 = b^2> is amenable yet has"
    " q_1 = 1 in one direction."
)


def format_class(presentation: Presentation, xi: CharacterClass) -> str:
    """Rows as `a=1,b=0`; rows of a higher-rank class are joined by `;`."""
    return ";".join(
        ",".join(f"{name}={value}" for name, value in zip(presentation.generators, row))
        for row in xi.primitive_rows
    )


@dataclass(frozen=True)
class Route:
    name: str
    witness: dict[str, Any]

    def as_json(self) -> dict[str, object]:
        return {"name": self.name, "witness": self.witness}


@dataclass(frozen=True)
class ScanEntry:
    xi: CharacterClass
    numbers: NovikovNumbers


@dataclass(frozen=True)
class AmenabilityReport:
    """Consistency of a user amenability assertion with b_1 = 0 on every class."""

    passed: bool
    checked: int
    violations: tuple[dict[str, Any], ...] = ()

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def as_json(self) -> dict[str, object]:
        return {
            "status": self.status,
            "classes_checked": self.checked,
            "violations": list(self.violations),
        }


@dataclass(frozen=True)
class Certificate:
    """Verdict plus the exact witnesses that produced it.

    Attributes:
        verdict: FREE_SUBGROUP_PRESENT iff routes is nonempty, else INCONCLUSIVE.
        routes: Fired routes with recomputable witnesses.
        presentation: Presentation text in canonical form (replay input).
        bns_implications: Membership statements about Sigma (never Sigma itself).
        amenability_check: Result of the amenability consistency mode.
        torsion_note: Torsion counts with the no-certification note.
    """

    verdict: str
    routes: tuple[Route, ...]
    presentation: str
    bns_implications: tuple[str, ...] = ()
    amenability_check: AmenabilityReport | None = None
    torsion_note: dict[str, Any] | None = None

    def __post_init__(self) -> None:
        expected = FREE_SUBGROUP_PRESENT if self.routes else INCONCLUSIVE
        if self.verdict != expected:
            raise AssertionError(f"verdict {self.verdict} with {len(self.routes)} routes.")

    @property
    def route_names(self) -> list[str]:
        return [route.name for route in self.routes]

    def as_json(self) -> dict[str, object]:
        return {
            "verdict": self.verdict,
            "presentation": self.presentation,
            "routes": [route.as_json() for route in self.routes],
            "bns_implications": list(self.bns_implications),
            "amenability_check": (
                self.amenability_check.as_json()
                if self.amenability_check is not None
                else None
            ),
            "torsion_note": self.torsion_note,
        }


def _bns_statements(label: str) -> tuple[str, ...]:
    return (
        f"xi = ({label}) is not in Sigma: H_1 with Novikov coefficients has"
        " positive rank.",
        "-xi is not in Sigma: b_1(-xi) = b_1(xi) > 0.",
        "Sigma and -Sigma together miss a nonzero class, so pi_1 contains a"
        " nonabelian free subgroup.",
    )


def _torsion_note(numbers: NovikovNumbers) -> dict[str, Any] | None:
    if numbers.torsion_plus is None and numbers.torsion_refused is None:
        return None
    return {
        "torsion_plus": numbers.torsion_counts(1),
        "torsion_minus": numbers.torsion_counts(-1),
        "refused": numbers.torsion_refused,
        "note": TORSION_NOTE,
    }


def _presentation_routes(presentation: Presentation) -> list[Route]:
    routes: list[Route] = []
    chi = presentation.euler_characteristic
    if chi < 0:
        routes.append(Route(ROUTE_EULER, {"chi": chi}))

    deficiency = presentation.deficiency
    if deficiency >= 2:
        if chi >= 0:
            raise AssertionError(f"deficiency {deficiency} with chi = {chi} >= 0.")
        routes.append(
            Route(
                ROUTE_DEFICIENCY,
                {
                    "generators": presentation.n_generators,
                    "relators": presentation.n_relators,
                    "deficiency": deficiency,
                },
            )
        )
    return routes


def certify(
    presentation: Presentation,
    xi: CharacterClass,
    numbers: NovikovNumbers,
) -> Certificate:
    """Fire every route the numbers and the presentation support."""
    routes: list[Route] = []
    bns: tuple[str, ...] = ()
    b1 = numbers.b1
    if b1 > 0:
        label = format_class(presentation, xi)
        routes.append(
            Route(ROUTE_NOVIKOV_B1, {"class": xi.as_json(), "label": label, "b1": b1})
        )
        bns = _bns_statements(label)
    routes.extend(_presentation_routes(presentation))

    return Certificate(
        verdict=FREE_SUBGROUP_PRESENT if routes else INCONCLUSIVE,
        routes=tuple(routes),
        presentation=format_presentation(presentation),
        bns_implications=bns,
        torsion_note=_torsion_note(numbers),
    )


def certify_scan(
    presentation: Presentation,
    entries: Sequence[ScanEntry],
    amenability: AmenabilityReport | None = None,
) -> Certificate:
    """Certificate for the first scanned class with b_1 > 0 (else the first class)."""
    if not entries:
        raise NoClass("no scanned classes to certify.")
    chosen = next((entry for entry in entries if entry.numbers.b1 > 0), entries[0])
    cert = certify(presentation, chosen.xi, chosen.numbers)
    if ROUTE_EULER in cert.route_names and ROUTE_NOVIKOV_B1 not in cert.route_names:
        basis_size = len(presentation.character_lattice_basis())
        if len(entries) >= basis_size:
            raise AssertionError("chi < 0 but no scanned class has b_1 > 0.")
    if amenability is None:
        return cert
    return Certificate(
        verdict=cert.verdict,
        routes=cert.routes,
        presentation=cert.presentation,
        bns_implications=cert.bns_implications,
        amenability_check=amenability,
        torsion_note=cert.torsion_note,
    )


def amenability_from_entries(
    presentation: Presentation, entries: Sequence[ScanEntry]
) -> AmenabilityReport:
    violations = tuple(
        {
            "class": entry.xi.as_json(),
            "label": format_class(presentation, entry.xi),
            "b1": entry.numbers.b1,
        }
        for entry in entries
        if entry.numbers.b1 != 0
    )
    if violations:
        LOGGER.warning(
            "amenability assertion contradicted by %d class(es)", len(violations)
        )
    return AmenabilityReport(
        passed=not violations, checked=len(entries), violations=violations
    )


def amenability_consistency(
    presentation: Presentation,
    flag: bool,
    scan: Sequence[CharacterClass],
    options: EngineOptions | None = None,
) -> AmenabilityReport:
    """Check that b_1 vanishes on every class of the scan.

    A failure means the amenability assertion is wrong (or there is a bug):
    amenable fundamental groups have b_1(xi) = 0 for every nonzero xi.
    """
    if not flag:
        raise InputError("amenability consistency needs the user assertion flag.")
    entries = [
        ScanEntry(xi, compute_numbers(assemble_presentation_complex(presentation, xi), options))
        for xi in scan
    ]
    return amenability_from_entries(presentation, entries)


def _scan_rows(
    presentation: Presentation, budget: int, seed: int
) -> list[tuple[int, ...]]:
    basis = presentation.character_lattice_basis()
    rows: list[tuple[int, ...]] = list(basis[:budget])
    seen = set(rows)
    rng = np.random.default_rng(seed)
    basis_array = np.array(basis, dtype=np.int64)
    attempts = 0
    while len(rows) < budget and attempts < budget * SCAN_ATTEMPTS_PER_CLASS:
        attempts += 1
        coeffs = rng.integers(
            -SCAN_COEFFICIENT_RANGE, SCAN_COEFFICIENT_RANGE + 1, size=len(basis)
        )
        if not coeffs.any():
            continue
        combined = coeffs @ basis_array
        if not combined.any():
            continue
        row = primitive_row([Fraction(int(v)) for v in combined])
        if row in seen:
            continue
        seen.add(row)
        rows.append(row)
    if len(rows) < budget:
        warnings.warn(
            f"class scan found only {len(rows)} distinct primitive classes"
            f" for a budget of {budget}.",
            UserWarning,
            stacklevel=3,
        )
    return rows


def scan_classes(
    presentation: Presentation,
    budget: int,
    seed: int,
    options: EngineOptions | None = None,
) -> list[ScanEntry]:
    """Basis directions of the character lattice, then random primitive classes.

    Raises:
        NoClass: The abelianization has rank 0.
    """
    if budget < 1:
        raise InputError("scan budget must be at least 1.")
    if presentation.first_betti_number() == 0:
        raise NoClass("first Betti number is 0; no nonzero class exists.")
    entries = []
    for row in _scan_rows(presentation, budget, seed):
        xi = validate_character(presentation, [list(row)])
        numbers = compute_numbers(assemble_presentation_complex(presentation, xi), options)
        LOGGER.info("scanned %s: b1 = %d", format_class(presentation, xi), numbers.b1)
        entries.append(ScanEntry(xi, numbers))
    return entries


def replay_certificate(
    document: dict[str, Any],
    options: EngineOptions | None = None,
) -> Certificate:
    """Recompute a certificate from its serialized presentation and witnesses.

    Raises:
        InputError: The document lacks a presentation or has a malformed witness.
    """
    if not isinstance(document, dict) or "presentation" not in document:
        raise InputError("certificate document must carry the presentation text.")
    presentation = parse_presentation(str(document["presentation"]))
    witness_rows = None
    for route in document.get("routes", []):
        if isinstance(route, dict) and route.get("name") == ROUTE_NOVIKOV_B1:
            witness = route.get("witness", {})
            witness_rows = witness.get("class") if isinstance(witness, dict) else None
            if not isinstance(witness_rows, list):
                raise InputError("novikov-b1 witness must carry the class rows.")
    if witness_rows is None:
        routes = tuple(_presentation_routes(presentation))
        return Certificate(
            verdict=FREE_SUBGROUP_PRESENT if routes else INCONCLUSIVE,
            routes=routes,
            presentation=format_presentation(presentation),
        )
    xi = validate_character(presentation, witness_rows)
    numbers = compute_numbers(assemble_presentation_complex(presentation, xi), options)
    return certify(presentation, xi, numbers)
