"""Rank, minors and determinants of Laurent-polynomial matrices.

Exact ranks use fraction-free (Bareiss) elimination over Z[t1..tr]; every
division is exact. Modular ranks evaluate the matrix at random points of
(F_p^*)^r and eliminate over F_p with numpy int64 arithmetic (p < 2**31, so
every product fits in 62 bits).
"""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
import logging
from math import comb
from typing import Literal
from typing import Sequence

import numpy as np
from sympy import prevprime
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from novikov_probe.errors import RankMismatch
from novikov_probe.errors import ShapeMismatch
from novikov_probe.errors import SizeExceeded
from novikov_probe.laurent import LaurentPoly
from novikov_probe.options import DEFAULT_MINOR_CAP
from novikov_probe.options import EngineOptions

LOGGER = logging.getLogger(__name__)

RankMethodName = Literal["exact", "modular-sampled"]


@dataclass(frozen=True)
class PolyMatrix:
    """Dense matrix of Laurent polynomials with an explicit shape."""

    rank: int
    n_rows: int
    n_cols: int
    entries: tuple[tuple[LaurentPoly, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.n_rows:
            raise ShapeMismatch(
                f"expected {self.n_rows} rows, got {len(self.entries)}."
            )
        for index, row in enumerate(self.entries):
            if len(row) != self.n_cols:
                raise ShapeMismatch(
                    f"row {index} has {len(row)} entries, expected {self.n_cols}."
                )
            for entry in row:
                if entry.rank != self.rank:
                    raise RankMismatch(
                        f"entry of rank {entry.rank} in a rank-{self.rank} matrix."
                    )

    @classmethod
    def from_rows(
        cls, rank: int, rows: Sequence[Sequence[LaurentPoly]], n_cols: int | None = None
    ) -> "PolyMatrix":
        cols = n_cols if n_cols is not None else (len(rows[0]) if rows else 0)
        return cls(rank, len(rows), cols, tuple(tuple(row) for row in rows))

    @classmethod
    def zeros(cls, rank: int, n_rows: int, n_cols: int) -> "PolyMatrix":
        zero = LaurentPoly.zero(rank)
        return cls(rank, n_rows, n_cols, tuple((zero,) * n_cols for _ in range(n_rows)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def size(self) -> int:
        return self.n_rows * self.n_cols

    def is_zero(self) -> bool:
        return all(entry.is_zero() for row in self.entries for entry in row)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.n_cols != other.n_rows:
            raise ShapeMismatch(
                f"cannot multiply {self.shape} by {other.shape} matrices."
            )
        zero = LaurentPoly.zero(self.rank)
        rows = []
        for i in range(self.n_rows):
            row = []
            for j in range(other.n_cols):
                acc = zero
                for k in range(self.n_cols):
                    left = self.entries[i][k]
                    right = other.entries[k][j]
                    if left and right:
                        acc = acc + left * right
                row.append(acc)
            rows.append(tuple(row))
        return PolyMatrix(self.rank, self.n_rows, other.n_cols, tuple(rows))

    def inverted(self) -> "PolyMatrix":
        """Entrywise t_j -> t_j^-1."""
        return PolyMatrix(
            self.rank,
            self.n_rows,
            self.n_cols,
            tuple(tuple(entry.inverted() for entry in row) for row in self.entries),
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(
            self.rank,
            len(rows),
            len(cols),
            tuple(tuple(self.entries[i][j] for j in cols) for i in rows),
        )

    def evaluate_mod(self, point: Sequence[int], prime: int) -> np.ndarray:
        values = np.zeros((self.n_rows, self.n_cols), dtype=np.int64)
        for i, row in enumerate(self.entries):
            for j, entry in enumerate(row):
                if entry:
                    values[i, j] = entry.evaluate_mod(point, prime)
        return values

    def evaluate(self, point: Sequence[Fraction]) -> list[list[Fraction]]:
        return [[entry.evaluate(point) for entry in row] for row in self.entries]


@dataclass(frozen=True)
class RankWitness:
    prime: int
    point: tuple[int, ...]
    rank: int

    def as_json(self) -> dict[str, object]:
        return {"prime": self.prime, "point": list(self.point), "rank": self.rank}


@dataclass(frozen=True)
class RankResult:
    """Rank over Q(t1..tr).

    Attributes:
        value: The rank.
        method: "exact" or "modular-sampled".
        certificate: Modular witnesses (empty for a purely exact run).
        confirmed: True when an exact elimination produced or confirmed value.
    """

    value: int
    method: RankMethodName
    certificate: tuple[RankWitness, ...] = field(default=())
    confirmed: bool = True

    def as_json(self) -> dict[str, object]:
        return {
            "value": self.value,
            "method": self.method,
            "confirmed": self.confirmed,
            "certificate": [witness.as_json() for witness in self.certificate],
        }


@lru_cache(maxsize=None)
def primes_near_2_31(count: int) -> tuple[int, ...]:
    """The `count` largest primes below 2**31."""
    primes: list[int] = []
    current = 2**31
    for _ in range(count):
        current = int(prevprime(current))
        primes.append(current)
    return tuple(primes)


def _pivot_key(entry: LaurentPoly, row: int, col: int) -> tuple[int, int, int, int]:
    return (len(entry), entry.total_degree(), col, row)


def _choose_pivot(
    work: list[list[LaurentPoly]], start: int
) -> tuple[int, int] | None:
    best: tuple[int, int, int, int] | None = None
    for i in range(start, len(work)):
        for j in range(start, len(work[i])):
            entry = work[i][j]
            if entry:
                key = _pivot_key(entry, i, j)
                if best is None or key < best:
                    best = key
    if best is None:
        return None
    return best[3], best[2]


def _bareiss(matrix: PolyMatrix) -> tuple[int, LaurentPoly, int]:
    """Fraction-free elimination with full pivoting.

    Returns (rank, last pivot, permutation sign). Pivot rule: fewest terms,
    then lowest total degree, then lowest column index.
    """
    rank_ = matrix.rank
    work = [list(row) for row in matrix.entries]
    n_rows, n_cols = matrix.shape
    previous = LaurentPoly.constant(rank_, 1)
    zero = LaurentPoly.zero(rank_)
    sign = 1
    limit = min(n_rows, n_cols)
    step = 0
    for step in range(limit):
        pivot = _choose_pivot(work, step)
        if pivot is None:
            return step, previous, sign
        pi, pj = pivot
        if pi != step:
            work[step], work[pi] = work[pi], work[step]
            sign = -sign
        if pj != step:
            for row in work:
                row[step], row[pj] = row[pj], row[step]
            sign = -sign
        head = work[step][step]
        for i in range(step + 1, n_rows):
            lead = work[i][step]
            for j in range(step + 1, n_cols):
                numerator = head * work[i][j]
                if lead and work[step][j]:
                    numerator = numerator - lead * work[step][j]
                work[i][j] = numerator.exact_div(previous)
            work[i][step] = zero
        previous = head
    return limit, previous, sign


def exact_rank(matrix: PolyMatrix) -> int:
    if matrix.size == 0:
        return 0
    rank_, _, _ = _bareiss(matrix)
    return rank_


def bareiss_det(matrix: PolyMatrix) -> LaurentPoly:
    """Determinant of a square Laurent matrix by fraction-free elimination."""
    if matrix.n_rows != matrix.n_cols:
        raise ShapeMismatch(f"determinant of a non-square {matrix.shape} matrix.")
    if matrix.n_rows == 0:
        return LaurentPoly.constant(matrix.rank, 1)
    rank_, last, sign = _bareiss(matrix)
    if rank_ < matrix.n_rows:
        return LaurentPoly.zero(matrix.rank)
    return last if sign > 0 else -last


def modular_rank(values: np.ndarray, prime: int) -> int:
    """Rank over F_p of an int64 matrix by row echelon reduction."""
    work = np.array(values, dtype=np.int64) % prime
    n_rows, n_cols = work.shape
    rank_ = 0
    for col in range(n_cols):
        if rank_ == n_rows:
            break
        nonzero = np.nonzero(work[rank_:, col])[0]
        if nonzero.size == 0:
            continue
        pivot = rank_ + int(nonzero[0])
        if pivot != rank_:
            work[[rank_, pivot]] = work[[pivot, rank_]]
        inverse = pow(int(work[rank_, col]), -1, prime)
        work[rank_] = (work[rank_] * inverse) % prime
        factors = work[rank_ + 1 :, col].copy()
        work[rank_ + 1 :] = (
            work[rank_ + 1 :] - (factors[:, None] * work[rank_]) % prime
        ) % prime
        rank_ += 1
    return rank_


def sampled_rank(
    matrix: PolyMatrix,
    *,
    primes: int,
    points: int,
    seed: int,
) -> tuple[int, tuple[RankWitness, ...]]:
    """Max rank over random points of (F_p^*)^r; never exceeds the exact rank."""
    rng = np.random.default_rng(seed)
    witnesses: list[RankWitness] = []
    for prime in primes_near_2_31(primes):
        for _ in range(points):
            point = tuple(int(v) for v in rng.integers(1, prime, size=matrix.rank))
            value = modular_rank(matrix.evaluate_mod(point, prime), prime)
            witnesses.append(RankWitness(prime=prime, point=point, rank=value))
    best = max(witness.rank for witness in witnesses)
    if any(witness.rank != best for witness in witnesses):
        LOGGER.debug("modular samples disagree; jump points hit: %s", witnesses)
    return best, tuple(witnesses)


def rank_fraction_field(
    matrix: PolyMatrix,
    method: str = "auto",
    options: EngineOptions | None = None,
) -> RankResult:
    """Rank of a Laurent matrix over the fraction field Q(t1..tr).

    Args:
        matrix: Input matrix (empty allowed).
        method: "exact", "modular" or "auto".
        options: Sampling sizes, seed and the auto-mode exact size bound.
    """
    opts = options if options is not None else EngineOptions()
    if matrix.size == 0 or matrix.is_zero():
        return RankResult(value=0, method="exact")
    if method == "exact":
        return RankResult(value=exact_rank(matrix), method="exact")

    value, witnesses = sampled_rank(
        matrix,
        primes=opts.modular_primes,
        points=opts.modular_points,
        seed=opts.seed,
    )
    if method == "modular" or matrix.size > opts.exact_size_bound:
        if method == "auto":
            LOGGER.info(
                "matrix %s exceeds exact bound %d; rank %d is probabilistic",
                matrix.shape,
                opts.exact_size_bound,
                value,
            )
        return RankResult(
            value=value,
            method="modular-sampled",
            certificate=witnesses,
            confirmed=False,
        )

    exact = exact_rank(matrix)
    if value > exact:
        raise AssertionError(
            f"modular rank {value} exceeds exact rank {exact}; specialization bug."
        )
    return RankResult(value=exact, method="exact", certificate=witnesses)


def minors(
    matrix: PolyMatrix,
    k: int,
    cap: int = DEFAULT_MINOR_CAP,
) -> list[LaurentPoly]:
    """All nonzero k x k minors, rows and columns in lexicographic order.

    Raises:
        SizeExceeded: More than `cap` minors would be enumerated.
    """
    if k < 0:
        raise ShapeMismatch("minor size must be nonnegative.")
    if k == 0:
        return [LaurentPoly.constant(matrix.rank, 1)]
    if k > min(matrix.shape):
        return []
    count = comb(matrix.n_rows, k) * comb(matrix.n_cols, k)
    if count > cap:
        raise SizeExceeded(f"{count} minors of size {k} exceed the cap of {cap}.")
    result = []
    for rows in combinations(range(matrix.n_rows), k):
        for cols in combinations(range(matrix.n_cols), k):
            det = bareiss_det(matrix.submatrix(rows, cols))
            if det:
                result.append(det)
    return result


def rational_rank(values: Sequence[Sequence[Fraction]], n_cols: int) -> int:
    """Exact rank over Q of a Fraction matrix."""
    if not values or n_cols == 0:
        return 0
    rows = [[QQ(v.numerator, v.denominator) for v in row] for row in values]
    return DomainMatrix(rows, (len(rows), n_cols), QQ).rank()
