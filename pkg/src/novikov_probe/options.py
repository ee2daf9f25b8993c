"""Engine options and their documented defaults."""

from __future__ import annotations

from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import fields
from typing import Literal
from typing import Mapping

from novikov_probe.errors import InputError

RankMethod = Literal["exact", "modular", "auto"]
RANK_METHODS: tuple[str, str, str] = ("exact", "modular", "auto")

DEFAULT_EXACT_SIZE_BOUND = 144
DEFAULT_MODULAR_PRIMES = 3
DEFAULT_MODULAR_POINTS = 5
DEFAULT_MINOR_CAP = 10**6
DEFAULT_SAMPLES = 20
DEFAULT_SEED = 0
DEFAULT_SCAN_BUDGET = 10
BEZOUT_DEGREE = 25


@dataclass(frozen=True)
class EngineOptions:
    """Tunables shared by the rank, torsion and sampling engines.

    Args:
        rank_method: "exact", "modular" or "auto" (modular, then exact
            confirmation when the matrix has at most exact_size_bound entries).
        exact_size_bound: Entry-count bound for exact confirmation in auto mode.
        modular_primes: Number of primes near 2**31 used by modular sampling.
        modular_points: Evaluation points per prime.
        minor_cap: Largest number of k x k minors enumerated.
        samples: Flat-bundle samples for the generic-dimension oracle.
        seed: Seed recorded in every report.
        torsion: Compute torsion counts for rank-1 classes.
        torsion_fallback: Allow the compressed unit test past minor_cap.
    """

    rank_method: RankMethod = "auto"
    exact_size_bound: int = DEFAULT_EXACT_SIZE_BOUND
    modular_primes: int = DEFAULT_MODULAR_PRIMES
    modular_points: int = DEFAULT_MODULAR_POINTS
    minor_cap: int = DEFAULT_MINOR_CAP
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    torsion: bool = False
    torsion_fallback: bool = False

    def __post_init__(self) -> None:
        if self.rank_method not in RANK_METHODS:
            raise InputError("rank_method must be 'exact', 'modular' or 'auto'.")
        if self.exact_size_bound < 0:
            raise InputError("exact_size_bound must be nonnegative.")
        if self.modular_primes < 1 or self.modular_points < 1:
            raise InputError("modular_primes and modular_points must be positive.")
        if self.minor_cap < 1:
            raise InputError("minor_cap must be positive.")
        if self.samples < 1:
            raise InputError("samples must be positive.")

    @classmethod
    def from_dict(cls, values: Mapping[str, object]) -> "EngineOptions":
        """Options from a JSON object; values must match the default's type."""
        defaults = {item.name: item.default for item in fields(cls)}
        unknown = sorted(set(values) - set(defaults))
        if unknown:
            raise InputError(f"unknown engine options: {', '.join(unknown)}.")
        for name, value in values.items():
            if type(value) is not type(defaults[name]):
                raise InputError(
                    f"option {name} must be {type(defaults[name]).__name__},"
                    f" got {value!r}."
                )
        return cls(**values)  # type: ignore[arg-type]

    def as_dict(self) -> dict[str, object]:
        return asdict(self)
