"""CLI entry point for novikov-probe."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from fractions import Fraction
import json
import logging
from pathlib import Path
import sys
import time
from typing import Any
import warnings

from novikov_probe.artifacts import render_json
from novikov_probe.artifacts import write_csv
from novikov_probe.artifacts import write_report_json
from novikov_probe.certify import ScanEntry
from novikov_probe.certify import amenability_from_entries
from novikov_probe.certify import certify_scan
from novikov_probe.certify import format_class
from novikov_probe.certify import scan_classes
from novikov_probe.chain import BoundaryComplex
from novikov_probe.chain import dump_complex
from novikov_probe.chain import load_complex
from novikov_probe.chain import load_complex_file
from novikov_probe.corpus import run_selftest
from novikov_probe.errors import InputError
from novikov_probe.errors import ResourceCapError
from novikov_probe.fox import AbelianizationMap
from novikov_probe.fox import abelianization_map
from novikov_probe.fox import assemble_presentation_complex
from novikov_probe.novikov import NovikovNumbers
from novikov_probe.novikov import compute_numbers
from novikov_probe.novikov import flag_non_generic
from novikov_probe.novikov import generic_dims
from novikov_probe.novikov import sample_bundle
from novikov_probe.options import DEFAULT_EXACT_SIZE_BOUND
from novikov_probe.options import DEFAULT_MINOR_CAP
from novikov_probe.options import DEFAULT_SAMPLES
from novikov_probe.options import DEFAULT_SCAN_BUDGET
from novikov_probe.options import DEFAULT_SEED
from novikov_probe.options import RANK_METHODS
from novikov_probe.options import EngineOptions
from novikov_probe.presentation import CharacterClass
from novikov_probe.presentation import Presentation
from novikov_probe.presentation import format_presentation
from novikov_probe.presentation import parse_assignment
from novikov_probe.presentation import parse_presentation
from novikov_probe.presentation import rows_from_json
from novikov_probe.presentation import validate_character

LOGGER = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"
EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_RESOURCE_CAP = 3


def _add_common(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument(
        "--pres", dest="pres", help="Presentation such as `<a, b | a b a^-1 = b^2>`."
    )
    source.add_argument(
        "--complex", dest="complex_path", type=Path, help="Chain-complex JSON file."
    )
    source.add_argument(
        "--job",
        dest="job",
        type=Path,
        help="JSON job file with the input, classes and engine options; replaces"
        " the --xi, --xi-rows, --xi-given, --scan and engine flags.",
    )
    parser.add_argument(
        "--xi",
        dest="xi",
        action="append",
        default=[],
        metavar="GEN=VALUE,...",
        help="One character row; repeat for higher rank. Unnamed generators are 0.",
    )
    parser.add_argument(
        "--xi-rows",
        dest="xi_rows",
        type=Path,
        help="JSON list of rows; values are ints, finite floats or \"p/q\" strings.",
    )
    parser.add_argument(
        "--xi-given",
        dest="xi_given",
        action="store_true",
        help="The chain complex is already pushed along the class.",
    )
    parser.add_argument("--seed", dest="seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--method", dest="method", choices=RANK_METHODS, default="auto")
    parser.add_argument("--samples", dest="samples", type=int, default=DEFAULT_SAMPLES)
    parser.add_argument("--minor-cap", dest="minor_cap", type=int, default=DEFAULT_MINOR_CAP)
    parser.add_argument(
        "--exact-bound",
        dest="exact_bound",
        type=int,
        default=DEFAULT_EXACT_SIZE_BOUND,
        help="Largest entry count confirmed exactly in auto mode.",
    )
    parser.add_argument("--torsion", dest="torsion", action="store_true")
    parser.add_argument(
        "--torsion-fallback",
        dest="torsion_fallback",
        action="store_true",
        help="Past the minor cap, test units on random compressions.",
    )
    parser.add_argument("--out", dest="out", type=Path, help="Write the JSON report here.")
    parser.add_argument("--timings", dest="timings", action="store_true")


def _parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="novikov-probe",
        description="Novikov-Betti numbers, Novikov torsion and free-subgroup certificates.",
    )
    parser.add_argument(
        "--selftest",
        dest="selftest",
        action="store_true",
        help="Recompute the bundled corpus and compare against expected outputs.",
    )
    parser.add_argument("-v", "--verbose", dest="verbose", action="count", default=0)
    commands = parser.add_subparsers(dest="command")

    compute = commands.add_parser(
        "compute",
        help="Betti numbers and torsion counts for one class given by --xi or"
        " --xi-rows (class scans are a certify feature).",
    )
    _add_common(compute)
    compute.add_argument("--csv", dest="csv", type=Path, help="Betti/torsion table.")
    compute.add_argument("--echo-matrices", dest="echo_matrices", action="store_true")

    certify = commands.add_parser("certify", help="Free-subgroup certificate.")
    _add_common(certify)
    certify.add_argument(
        "--scan", dest="scan", type=int, default=None, metavar="N", help="Scan N classes."
    )
    certify.add_argument("--assert-amenable", dest="assert_amenable", action="store_true")

    sample = commands.add_parser(
        "sample", help="Flat line bundle sampling for one class (--xi or --xi-rows)."
    )
    _add_common(sample)
    sample.add_argument(
        "--point",
        dest="points",
        action="append",
        default=[],
        metavar="V1,V2,...",
        help="Explicit rational point (one value per variable); repeatable.",
    )

    args = parser.parse_args(argv)
    if not args.selftest and args.command is None:
        parser.error("a command is required unless --selftest is given.")
    return args


JOB_KEYS = frozenset(
    {
        "command",
        "presentation",
        "complex",
        "classes",
        "xi_rows",
        "xi_given",
        "scan",
        "seed",
        "points",
        "assert_amenable",
        "options",
    }
)


@dataclass(frozen=True)
class JobSpec:
    """Everything a report depends on; identical specs give identical reports."""

    command: str
    presentation_text: str | None = None
    complex_path: Path | None = None
    complex_document: dict[str, Any] | None = None
    xi_rows: tuple[tuple[str, ...], ...] | None = None
    xi_given: bool = False
    scan: int | None = None
    points: tuple[tuple[Fraction, ...], ...] = ()
    assert_amenable: bool = False
    echo_matrices: bool = False
    csv_path: Path | None = None
    timings: bool = False
    options: EngineOptions = field(default_factory=EngineOptions)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "JobSpec":
        if args.job is not None:
            if args.xi or args.xi_rows is not None:
                raise InputError("--job carries the classes; drop --xi and --xi-rows.")
            return cls.from_json(
                _read_json(args.job),
                args.command,
                echo_matrices=getattr(args, "echo_matrices", False),
                csv_path=getattr(args, "csv", None),
                timings=args.timings,
            )
        rows: list[list[object]] | None = None
        presentation = parse_presentation(args.pres) if args.pres is not None else None
        if args.xi and args.xi_rows is not None:
            raise InputError("use either --xi or --xi-rows, not both.")
        if args.xi:
            if presentation is None:
                raise InputError("--xi needs --pres; chain complexes use --xi-given.")
            rows = [list(parse_assignment(presentation, text)) for text in args.xi]
        elif args.xi_rows is not None:
            rows = rows_from_json(presentation, _read_json(args.xi_rows))
        return cls(
            command=args.command,
            presentation_text=args.pres,
            complex_path=args.complex_path,
            xi_rows=_row_strings(rows),
            xi_given=args.xi_given,
            scan=getattr(args, "scan", None),
            points=tuple(_parse_point(text) for text in getattr(args, "points", [])),
            assert_amenable=getattr(args, "assert_amenable", False),
            echo_matrices=getattr(args, "echo_matrices", False),
            csv_path=getattr(args, "csv", None),
            timings=args.timings,
            options=EngineOptions(
                rank_method=args.method,
                exact_size_bound=args.exact_bound,
                minor_cap=args.minor_cap,
                samples=args.samples,
                seed=args.seed,
                torsion=args.torsion,
                torsion_fallback=args.torsion_fallback,
            ),
        )

    @classmethod
    def from_json(
        cls,
        document: Any,
        command: str,
        *,
        echo_matrices: bool = False,
        csv_path: Path | None = None,
        timings: bool = False,
    ) -> "JobSpec":
        """Job file (or the `job` echo of a report) for the given subcommand.

        Keys: `presentation` text or `complex` (a document or a file path),
        `classes` as rows or `{"scan": N, "seed": S}`, and `options`.

        Raises:
            InputError: The document is malformed or does not fit the command.
        """
        if not isinstance(document, dict):
            raise InputError("job file must hold a JSON object.")
        unknown = sorted(set(document) - JOB_KEYS)
        if unknown:
            raise InputError(f"unknown job keys: {', '.join(unknown)}.")
        declared = document.get("command")
        if declared is not None and declared != command:
            raise InputError(f"job file is for {declared!r}, not {command!r}.")

        text = document.get("presentation")
        complex_entry = document.get("complex")
        if (text is None) == (complex_entry is None):
            raise InputError("job needs exactly one of presentation or complex.")
        if text is not None and not isinstance(text, str):
            raise InputError("job presentation must be a string.")
        complex_path = Path(complex_entry) if isinstance(complex_entry, str) else None
        complex_document = complex_entry if isinstance(complex_entry, dict) else None
        if complex_entry is not None and complex_path is None and complex_document is None:
            raise InputError("job complex must be a chain-complex object or a file path.")
        presentation = parse_presentation(text) if text is not None else None

        classes = document.get("classes", document.get("xi_rows"))
        scan = document.get("scan")
        seed = document.get("seed")
        rows: list[list[object]] | None = None
        if isinstance(classes, dict):
            extra = sorted(set(classes) - {"scan", "seed"})
            if extra:
                raise InputError(f"unknown class scan keys: {', '.join(extra)}.")
            scan = classes.get("scan")
            seed = classes.get("seed", seed)
        elif isinstance(classes, list):
            rows = rows_from_json(presentation, classes)
        elif classes is not None:
            raise InputError("job classes must be a list of rows or a scan object.")
        if scan is not None:
            if type(scan) is not int:
                raise InputError(f"scan budget must be an integer, got {scan!r}.")
            if command != "certify":
                raise InputError("class scans are only available to certify.")

        raw_options = document.get("options") or {}
        if not isinstance(raw_options, dict):
            raise InputError("job options must be a JSON object.")
        options = EngineOptions.from_dict(raw_options)
        if seed is not None:
            if type(seed) is not int:
                raise InputError(f"seed must be an integer, got {seed!r}.")
            if "seed" in raw_options and raw_options["seed"] != seed:
                raise InputError("job gives two different seeds.")
            options = replace(options, seed=seed)

        points = document.get("points") or []
        if not isinstance(points, list):
            raise InputError("job points must be a list.")
        xi_given = document.get("xi_given")
        return cls(
            command=command,
            presentation_text=text,
            complex_path=complex_path,
            complex_document=complex_document,
            xi_rows=_row_strings(rows),
            xi_given=complex_entry is not None if xi_given is None else bool(xi_given),
            scan=scan,
            points=tuple(_point_from_json(point) for point in points),
            assert_amenable=bool(document.get("assert_amenable", False)),
            echo_matrices=echo_matrices,
            csv_path=csv_path,
            timings=timings,
            options=options,
        )

    def as_json(self) -> dict[str, object]:
        complex_: object = self.complex_document
        if self.complex_path is not None:
            complex_ = str(self.complex_path)
        return {
            "command": self.command,
            "presentation": self.presentation_text,
            "complex": complex_,
            "xi_rows": [list(row) for row in self.xi_rows] if self.xi_rows else None,
            "xi_given": self.xi_given,
            "scan": self.scan,
            "points": [[str(v) for v in point] for point in self.points],
            "assert_amenable": self.assert_amenable,
            "seed": self.options.seed,
            "options": self.options.as_dict(),
        }


def _row_strings(rows: list[list[object]] | None) -> tuple[tuple[str, ...], ...] | None:
    if rows is None:
        return None
    return tuple(tuple(str(value) for value in row) for row in rows)


def _read_json(path: Path) -> Any:
    if not path.exists():
        raise InputError(f"Input file does not exist: {path}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _parse_point(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"point must be comma-separated rationals, got {text!r}") from None


def _point_from_json(point: object) -> tuple[Fraction, ...]:
    if isinstance(point, str):
        return _parse_point(point)
    if isinstance(point, list) and point:
        return _parse_point(",".join(str(value) for value in point))
    raise InputError(f"point must be a list of rationals or a string, got {point!r}")


@dataclass(frozen=True)
class _Resolved:
    complex_: BoundaryComplex
    presentation: Presentation | None = None
    xi: CharacterClass | None = None
    mapping: AbelianizationMap | None = None

    def class_json(self) -> dict[str, object] | None:
        if self.xi is None or self.presentation is None:
            return None
        return {
            "rows": self.xi.as_json(),
            "label": format_class(self.presentation, self.xi),
            "lattice": self.mapping.as_json() if self.mapping is not None else None,
        }


def _resolve(job: JobSpec) -> _Resolved:
    if job.complex_path is not None or job.complex_document is not None:
        if not job.xi_given:
            raise InputError("--complex requires --xi-given (the class is built in).")
        if job.complex_document is not None:
            return _Resolved(load_complex(job.complex_document))
        assert job.complex_path is not None
        return _Resolved(load_complex_file(job.complex_path))
    assert job.presentation_text is not None
    presentation = parse_presentation(job.presentation_text)
    if job.xi_rows is None:
        raise InputError(f"{job.command} needs a class: pass --xi or --xi-rows.")
    xi = validate_character(presentation, [list(row) for row in job.xi_rows])
    mapping = abelianization_map(xi)
    return _Resolved(
        assemble_presentation_complex(presentation, xi, mapping),
        presentation,
        xi,
        mapping,
    )


def _warn_probabilistic(numbers: NovikovNumbers) -> None:
    if numbers.probabilistic:
        warnings.warn(
            "some ranks are modular samples without exact confirmation.",
            UserWarning,
            stacklevel=2,
        )


def cmd_compute(job: JobSpec) -> dict[str, Any]:
    """Betti numbers, torsion per direction, Euler data and the sampler cross-check."""
    started = time.perf_counter()
    resolved = _resolve(job)
    built = time.perf_counter()
    numbers = compute_numbers(resolved.complex_, job.options)
    computed = time.perf_counter()
    sampled = generic_dims(
        resolved.complex_, job.options.samples, job.options.seed, job.options
    )
    finished = time.perf_counter()
    _warn_probabilistic(numbers)

    torsion: dict[str, object] | None = None
    if job.options.torsion:
        torsion = {
            "plus": [r.as_json() for r in numbers.torsion_plus or ()],
            "minus": [r.as_json() for r in numbers.torsion_minus or ()],
            "refused": numbers.torsion_refused,
        }
    samples = flag_non_generic(sampled.samples, numbers.betti)
    report: dict[str, Any] = {
        "command": "compute",
        "job": job.as_json(),
        "class": resolved.class_json(),
        "dims": list(resolved.complex_.dims),
        "variables": list(resolved.complex_.variables),
        "betti": list(numbers.betti),
        "euler": numbers.euler,
        "euler_check": numbers.euler_check,
        "ranks": [result.as_json() for result in numbers.ranks],
        "probabilistic": numbers.probabilistic,
        "torsion": torsion,
        "sampler": {
            "min_dims": list(sampled.dims),
            "agrees_with_betti": list(sampled.dims) == list(numbers.betti),
            "jump_samples": [s.as_json() for s in samples if s.non_generic],
            "samples": len(samples),
        },
    }
    if job.echo_matrices:
        report["complex"] = dump_complex(resolved.complex_)
    if job.timings:
        report["timings"] = {
            "assemble_s": built - started,
            "numbers_s": computed - built,
            "sampler_s": finished - computed,
        }
    if job.csv_path is not None:
        write_csv(job.csv_path, numbers)
    return report


def cmd_certify(job: JobSpec) -> dict[str, Any]:
    """Certificate for the given class, or for a scan of classes."""
    if job.presentation_text is None:
        raise InputError("certify needs --pres (deficiency and Euler routes use it).")
    started = time.perf_counter()
    presentation = parse_presentation(job.presentation_text)
    if job.xi_rows is not None and job.scan is None:
        xi = validate_character(presentation, [list(row) for row in job.xi_rows])
        complex_ = assemble_presentation_complex(presentation, xi)
        entries = [ScanEntry(xi, compute_numbers(complex_, job.options))]
    else:
        budget = job.scan if job.scan is not None else DEFAULT_SCAN_BUDGET
        entries = scan_classes(presentation, budget, job.options.seed, job.options)
    amenability = (
        amenability_from_entries(presentation, entries) if job.assert_amenable else None
    )
    certificate = certify_scan(presentation, entries, amenability)
    report: dict[str, Any] = {
        "command": "certify",
        "job": job.as_json(),
        "presentation": format_presentation(presentation),
        "certificate": certificate.as_json(),
        "scan": [
            {
                "class": entry.xi.as_json(),
                "label": format_class(presentation, entry.xi),
                "betti": list(entry.numbers.betti),
            }
            for entry in entries
        ],
    }
    if job.timings:
        report["timings"] = {"certify_s": time.perf_counter() - started}
    return report


def cmd_sample(job: JobSpec) -> dict[str, Any]:
    """Flat line bundle dimensions at explicit or random points, jump points flagged."""
    started = time.perf_counter()
    resolved = _resolve(job)
    numbers = compute_numbers(resolved.complex_, replace(job.options, torsion=False))
    if job.points:
        raw = tuple(sample_bundle(resolved.complex_, point) for point in job.points)
    else:
        raw = generic_dims(
            resolved.complex_, job.options.samples, job.options.seed, job.options
        ).samples
    samples = flag_non_generic(raw, numbers.betti)
    min_dims = [min(column) for column in zip(*(s.dims for s in samples))]
    report: dict[str, Any] = {
        "command": "sample",
        "job": job.as_json(),
        "class": resolved.class_json(),
        "betti": list(numbers.betti),
        "min_dims": min_dims,
        "agrees_with_betti": min_dims == list(numbers.betti),
        "samples": [sample.as_json() for sample in samples],
        "jump_points": [i for i, sample in enumerate(samples) if sample.non_generic],
    }
    if job.timings:
        report["timings"] = {"sample_s": time.perf_counter() - started}
    return report


COMMANDS = {"compute": cmd_compute, "certify": cmd_certify, "sample": cmd_sample}


def _summary(report: dict[str, Any]) -> str:
    if report["command"] == "certify":
        cert = report["certificate"]
        lines = [f"Verdict: {cert['verdict']}"]
        lines += [f"  route {route['name']}: {route['witness']}" for route in cert["routes"]]
        lines += [f"  {statement}" for statement in cert["bns_implications"]]
        if cert["amenability_check"] is not None:
            lines.append(f"Amenability consistency: {cert['amenability_check']['status']}")
        return "\n".join(lines)
    if report["command"] == "sample":
        return f"Betti {report['betti']}; min sampled dims {report['min_dims']}"
    return f"Betti {report['betti']}; euler {report['euler']}"


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def main(argv: list[str] | None = None) -> None:
    """CLI entry point."""
    args = _parse_args(argv)
    _configure_logging(args.verbose)
    try:
        if args.selftest:
            problems = run_selftest()
            for problem in problems:
                print(problem)
            if problems:
                print(f"Selftest failed: {len(problems)} difference(s).", file=sys.stderr)
                raise SystemExit(EXIT_SELFTEST_FAILED)
            print("Selftest passed.")
            if args.command is None:
                return

        job = JobSpec.from_args(args)
        report = COMMANDS[job.command](job)
        if job.command == "certify":
            print(_summary(report))
            if args.out is not None:
                write_report_json(args.out, report)
        elif args.out is not None:
            write_report_json(args.out, report)
            print(_summary(report))
        else:
            sys.stdout.write(render_json(report))
    except ResourceCapError as exc:
        print(f"Resource cap hit: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_RESOURCE_CAP)
    except InputError as exc:
        print(f"Input error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT_ERROR)
    except SystemExit:
        raise
    except Exception as exc:  # pragma: no cover - CLI guardrail
        print(f"Error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT_ERROR)


if __name__ == "__main__":
    main()
