"""Novikov-Betti numbers, Novikov torsion counts and flat-bundle sampling.

Direction convention: complexes are written in t with xi(t) > 0. The
completion for direction +1 allows series infinite towards t^-inf, for -1
towards t^+inf. Unit tests rewrite elements in s with xi(s) < 0
(s = t^-1 for +1, s = t for -1) so every series lives in Z((s)).
"""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from fractions import Fraction
import logging
from typing import Sequence

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from novikov_probe.chain import BoundaryComplex
from novikov_probe.errors import AllZero
from novikov_probe.errors import InputError
from novikov_probe.errors import RankTooHigh
from novikov_probe.errors import ShapeMismatch
from novikov_probe.errors import SizeExceeded
from novikov_probe.errors import ZeroCoordinate
from novikov_probe.errors import ZeroElement
from novikov_probe.laurent import LaurentPoly
from novikov_probe.linalg import PolyMatrix
from novikov_probe.linalg import RankResult
from novikov_probe.linalg import bareiss_det
from novikov_probe.linalg import exact_rank
from novikov_probe.linalg import minors
from novikov_probe.linalg import modular_rank
from novikov_probe.linalg import primes_near_2_31
from novikov_probe.linalg import rank_fraction_field
from novikov_probe.linalg import rational_rank
from novikov_probe.options import BEZOUT_DEGREE
from novikov_probe.options import EngineOptions
from novikov_probe.univariate import GcdData
from novikov_probe.univariate import univariate_gcd_data

LOGGER = logging.getLogger(__name__)

COMPRESSION_BATCH = 8
COMPRESSION_RANGE = 3


def _check_direction(direction: int) -> int:
    if direction not in (1, -1):
        raise InputError(f"direction must be +1 or -1, got {direction!r}.")
    return direction


def _require_rank_one(poly: LaurentPoly) -> None:
    if poly.rank != 1:
        raise RankTooHigh(f"Novikov unit tests need rank 1, got rank {poly.rank}.")


def to_series_variable(f: LaurentPoly, direction: int) -> LaurentPoly:
    """Rewrite f in the variable s with xi(s) < 0."""
    _require_rank_one(f)
    return f.inverted() if _check_direction(direction) > 0 else f


def unit_in_novikov(f: LaurentPoly, direction: int) -> bool:
    """True iff the extreme term of f in the given direction has coefficient +-1.

    Raises:
        ZeroElement: f is zero.
    """
    _require_rank_one(f)
    _check_direction(direction)
    if f.is_zero():
        raise ZeroElement("zero is never a unit.")
    _, coeff = f.terms[-1] if direction > 0 else f.terms[0]
    return abs(coeff) == 1


def gcd_data(fs: Sequence[LaurentPoly], direction: int) -> GcdData:
    return univariate_gcd_data([to_series_variable(f, direction) for f in fs])


def gcd_is_unit(fs: Sequence[LaurentPoly], direction: int) -> bool:
    """Whether gcd(fs) is a unit of the rank-1 Novikov ring.

    Nonunit iff some prime divides every coefficient of every f_i, or
    |g(0)| > 1 for g the primitive Q[s]-gcd of the s-power-stripped f_i.

    Raises:
        AllZero: Every f_i is zero.
    """
    return gcd_data(fs, direction).is_unit


def truncated_bezout_exists(
    fs: Sequence[LaurentPoly],
    direction: int,
    degree: int = BEZOUT_DEGREE,
) -> bool:
    """Search integer u_i with sum u_i f_i = s^m (mod s^(degree+1)), m <= degree.

    The lattice spanned by s^j f_i (stripped, truncated) is closed under
    multiplication by s, so it suffices to test whether it contains s^degree.
    Any hit gives sum u_i f_i = s^m (unit of Z[[s]]), an exact Bezout identity.
    """
    series = [to_series_variable(f, direction) for f in fs if f]
    if not series:
        raise AllZero("Bezout search needs at least one nonzero polynomial.")
    size = degree + 1
    columns: list[list[int]] = []
    for f in series:
        _, poly = f.to_polynomial()
        coeffs = {monom[0]: int(coeff) for monom, coeff in poly.items()}
        for shift in range(size):
            column = [0] * size
            for power, coeff in coeffs.items():
                if shift + power < size:
                    column[shift + power] = coeff
            columns.append(column)
    lattice = Matrix(size, len(columns), lambda i, j: columns[j][i])
    basis = hermite_normal_form(lattice)
    if basis.shape != (size, size):
        raise AssertionError("shifted generators must span a full-rank lattice.")
    target = Matrix([0] * degree + [1])
    solution = basis.LUsolve(target)
    return all(value.is_integer for value in solution)


@dataclass(frozen=True)
class TorsionRecord:
    """Torsion count q_i for one degree and direction.

    Attributes:
        degree: i.
        direction: +1 or -1 (relative to t).
        count: q_i = rank(d_{i+1}) - largest k with Delta_k a unit.
        boundary_rank: rank of d_{i+1}.
        unit_minor_size: largest k with Delta_k a unit.
        method: "empty", "minors" or "compressed".
        witness: Gcd data of the first nonunit Delta_k, if any.
    """

    degree: int
    direction: int
    count: int
    boundary_rank: int
    unit_minor_size: int
    method: str
    witness: GcdData | None = None

    def as_json(self) -> dict[str, object]:
        return {
            "degree": self.degree,
            "direction": "+" if self.direction > 0 else "-",
            "count": self.count,
            "boundary_rank": self.boundary_rank,
            "unit_minor_size": self.unit_minor_size,
            "method": self.method,
            "witness": self.witness.as_json() if self.witness is not None else None,
        }


def _compressed_elements(
    matrix: PolyMatrix, k: int, options: EngineOptions
) -> list[LaurentPoly]:
    """Elements det(P M Q) of the ideal of k x k minors (Cauchy-Binet)."""
    rng = np.random.default_rng(options.seed + k)
    elements: list[LaurentPoly] = []
    for _ in range(COMPRESSION_BATCH):
        left = rng.integers(-COMPRESSION_RANGE, COMPRESSION_RANGE + 1, (k, matrix.n_rows))
        right = rng.integers(-COMPRESSION_RANGE, COMPRESSION_RANGE + 1, (matrix.n_cols, k))
        p_matrix = PolyMatrix.from_rows(
            matrix.rank,
            [[LaurentPoly.constant(matrix.rank, int(v)) for v in row] for row in left],
            matrix.n_rows,
        )
        q_matrix = PolyMatrix.from_rows(
            matrix.rank,
            [[LaurentPoly.constant(matrix.rank, int(v)) for v in row] for row in right],
            k,
        )
        det = bareiss_det(p_matrix @ matrix @ q_matrix)
        if det:
            elements.append(det)
    return elements


def _delta_unit(
    matrix: PolyMatrix, k: int, direction: int, options: EngineOptions
) -> tuple[bool, GcdData, str]:
    try:
        elements = minors(matrix, k, cap=options.minor_cap)
        method = "minors"
    except SizeExceeded:
        if not options.torsion_fallback:
            raise
        LOGGER.warning("minor cap hit at k=%d; using compressed unit test", k)
        elements = _compressed_elements(matrix, k, options)
        method = "compressed"
        if not elements:
            raise SizeExceeded(
                f"compressed unit test found no nonzero {k} x {k} element."
            ) from None
    data = gcd_data(elements, direction)
    return data.is_unit, data, method


def torsion_record(
    complex_: BoundaryComplex,
    degree: int,
    direction: int,
    options: EngineOptions | None = None,
) -> TorsionRecord:
    """Novikov torsion count q_degree with its witness.

    Raises:
        RankTooHigh: The complex is over more than one variable.
        SizeExceeded: The minor cap is hit and the fallback is off.
    """
    opts = options if options is not None else EngineOptions()
    _check_direction(direction)
    if complex_.ring_rank != 1:
        raise RankTooHigh(
            f"torsion counts need a rank-1 class; ring rank is {complex_.ring_rank}."
        )
    matrix = complex_.boundary(degree + 1)
    if matrix.size == 0 or matrix.is_zero():
        return TorsionRecord(degree, direction, 0, 0, 0, "empty")

    rho = exact_rank(matrix)
    seen: dict[int, bool] = {0: True}
    data_at: dict[int, GcdData] = {}
    methods: set[str] = set()
    lo, hi = 0, rho
    while lo < hi:
        mid = (lo + hi + 1) // 2
        unit, data, method = _delta_unit(matrix, mid, direction, opts)
        seen[mid] = unit
        data_at[mid] = data
        methods.add(method)
        if unit:
            lo = mid
        else:
            hi = mid - 1

    for small, small_unit in seen.items():
        for large, large_unit in seen.items():
            if small < large and large_unit and not small_unit:
                raise AssertionError(
                    f"Delta_{large} is a unit but Delta_{small} is not."
                )

    witness = data_at.get(lo + 1)
    return TorsionRecord(
        degree=degree,
        direction=direction,
        count=rho - lo,
        boundary_rank=rho,
        unit_minor_size=lo,
        method="compressed" if "compressed" in methods else "minors",
        witness=witness,
    )


def torsion_count(
    complex_: BoundaryComplex,
    degree: int,
    direction: int,
    options: EngineOptions | None = None,
) -> int:
    """q_degree for the rank-1 completion in the given direction."""
    return torsion_record(complex_, degree, direction, options).count


def torsion_profile(
    complex_: BoundaryComplex,
    direction: int,
    options: EngineOptions | None = None,
) -> tuple[TorsionRecord, ...]:
    return tuple(
        torsion_record(complex_, degree, direction, options)
        for degree in range(complex_.top_degree + 1)
    )


def boundary_ranks(
    complex_: BoundaryComplex,
    options: EngineOptions | None = None,
) -> tuple[RankResult, ...]:
    """Ranks of d_1..d_d over Q(t1..tr)."""
    opts = options if options is not None else EngineOptions()
    results = []
    for k, matrix in enumerate(complex_.boundaries, start=1):
        result = rank_fraction_field(matrix, opts.rank_method, opts)
        LOGGER.debug("rank d%d = %d (%s)", k, result.value, result.method)
        results.append(result)
    return tuple(results)


def _betti_from_ranks(complex_: BoundaryComplex, ranks: Sequence[int]) -> list[int]:
    padded = [0, *ranks, 0]
    return [
        complex_.dims[i] - padded[i] - padded[i + 1]
        for i in range(complex_.top_degree + 1)
    ]


def novikov_betti(
    complex_: BoundaryComplex,
    method: str = "auto",
    options: EngineOptions | None = None,
) -> list[int]:
    """b_i = n_i - rank d_i - rank d_{i+1} over Q(t1..tr), i = 0..top degree."""
    opts = options if options is not None else EngineOptions()
    if method != opts.rank_method:
        opts = replace(opts, rank_method=method)  # type: ignore[arg-type]
    ranks = [result.value for result in boundary_ranks(complex_, opts)]
    return _betti_from_ranks(complex_, ranks)


@dataclass(frozen=True)
class BundleSample:
    """Homology dimensions with coefficients in one flat line bundle.

    Attributes:
        point: Monodromies t_j -> point_j (rationals, or residues mod prime).
        prime: Characteristic of the sample field (None for Q).
        dims: h_0..h_top at the point.
        non_generic: True when dims exceed the Novikov-Betti numbers.
    """

    point: tuple[Fraction | int, ...]
    prime: int | None
    dims: tuple[int, ...]
    non_generic: bool = False

    def as_json(self) -> dict[str, object]:
        return {
            "point": [str(value) for value in self.point],
            "field": "Q" if self.prime is None else f"F_{self.prime}",
            "dims": list(self.dims),
            "non_generic": self.non_generic,
        }


def sample_bundle(
    complex_: BoundaryComplex,
    point: Sequence[Fraction | int],
    prime: int | None = None,
) -> BundleSample:
    """Specialize t_j -> point_j and compute h_i over Q or F_prime.

    Raises:
        ShapeMismatch: The point has the wrong number of coordinates.
        ZeroCoordinate: A coordinate is zero (monodromies must be invertible).
    """
    if len(point) != complex_.ring_rank:
        raise ShapeMismatch(
            f"point has {len(point)} coordinates for ring rank {complex_.ring_rank}."
        )
    if prime is None:
        coords: tuple[Fraction | int, ...] = tuple(Fraction(v) for v in point)
        if any(v == 0 for v in coords):
            raise ZeroCoordinate("flat bundle monodromies must be nonzero.")
        ranks = [
            rational_rank(matrix.evaluate(coords), matrix.n_cols)  # type: ignore[arg-type]
            for matrix in complex_.boundaries
        ]
    else:
        coords = tuple(int(v) % prime for v in point)
        if any(v == 0 for v in coords):
            raise ZeroCoordinate(f"flat bundle monodromies must be nonzero mod {prime}.")
        ranks = [
            modular_rank(matrix.evaluate_mod(coords, prime), prime)  # type: ignore[arg-type]
            if matrix.size
            else 0
            for matrix in complex_.boundaries
        ]
    return BundleSample(
        point=coords, prime=prime, dims=tuple(_betti_from_ranks(complex_, ranks))
    )


@dataclass(frozen=True)
class GenericDims:
    dims: tuple[int, ...]
    samples: tuple[BundleSample, ...]

    def as_json(self) -> dict[str, object]:
        return {
            "min_dims": list(self.dims),
            "samples": [sample.as_json() for sample in self.samples],
        }


def generic_dims(
    complex_: BoundaryComplex,
    samples: int,
    seed: int,
    options: EngineOptions | None = None,
) -> GenericDims:
    """Componentwise minimum of h_i over random points of (F_p^*)^r."""
    if samples < 1:
        raise InputError("samples must be at least 1.")
    opts = options if options is not None else EngineOptions()
    primes = primes_near_2_31(opts.modular_primes)
    rng = np.random.default_rng(seed)
    taken: list[BundleSample] = []
    for index in range(samples):
        prime = primes[index % len(primes)]
        point = [int(v) for v in rng.integers(1, prime, size=complex_.ring_rank)]
        taken.append(sample_bundle(complex_, point, prime))
    dims = tuple(min(column) for column in zip(*(s.dims for s in taken)))
    return GenericDims(dims=dims, samples=tuple(taken))


def flag_non_generic(
    samples: Sequence[BundleSample], betti: Sequence[int]
) -> tuple[BundleSample, ...]:
    """Mark samples whose dims exceed the Novikov-Betti numbers."""
    return tuple(
        replace(sample, non_generic=any(h > b for h, b in zip(sample.dims, betti)))
        for sample in samples
    )


@dataclass(frozen=True)
class NovikovNumbers:
    """Novikov-Betti numbers, torsion counts and Euler data of one complex.

    torsion_plus / torsion_minus are relative to the class the complex was
    built from (xi and -xi); None when torsion was not requested or refused.
    """

    betti: tuple[int, ...]
    euler: int
    chain_ranks: tuple[int, ...]
    ranks: tuple[RankResult, ...] = field(default=())
    torsion_plus: tuple[TorsionRecord, ...] | None = None
    torsion_minus: tuple[TorsionRecord, ...] | None = None
    torsion_refused: str | None = None

    @property
    def b1(self) -> int:
        return self.betti[1] if len(self.betti) > 1 else 0

    @property
    def probabilistic(self) -> bool:
        return any(not result.confirmed for result in self.ranks)

    @property
    def euler_check(self) -> dict[str, int]:
        return {
            "alternating_betti": sum((-1) ** i * b for i, b in enumerate(self.betti)),
            "alternating_chain_ranks": sum(
                (-1) ** i * n for i, n in enumerate(self.chain_ranks)
            ),
        }

    def torsion_counts(self, sign: int) -> list[int] | None:
        records = self.torsion_plus if sign > 0 else self.torsion_minus
        return None if records is None else [record.count for record in records]


def compute_numbers(
    complex_: BoundaryComplex,
    options: EngineOptions | None = None,
) -> NovikovNumbers:
    """Betti numbers (and torsion when requested) of a Laurent chain complex."""
    opts = options if options is not None else EngineOptions()
    ranks = boundary_ranks(complex_, opts)
    betti = tuple(_betti_from_ranks(complex_, [r.value for r in ranks]))
    alternating = sum((-1) ** i * b for i, b in enumerate(betti))
    if alternating != complex_.euler_characteristic:
        raise AssertionError(
            f"alternating Betti sum {alternating} differs from Euler"
            f" characteristic {complex_.euler_characteristic}."
        )

    plus = minus = None
    refused = None
    if opts.torsion:
        if complex_.ring_rank == 1:
            plus = torsion_profile(complex_, 1, opts)
            minus = torsion_profile(complex_, -1, opts)
        else:
            refused = (
                f"torsion counts are defined here for rank-1 classes only;"
                f" this class has rank {complex_.ring_rank}."
            )
            LOGGER.info(refused)

    return NovikovNumbers(
        betti=betti,
        euler=complex_.euler_characteristic,
        chain_ranks=complex_.dims,
        ranks=ranks,
        torsion_plus=plus,
        torsion_minus=minus,
        torsion_refused=refused,
    )
