"""Finite chain complexes of Laurent-polynomial matrices and their JSON schema.

Schema::

    {"ring_rank": r, "variables": ["t1", ...], "dims": [n0, ..., nd],
     "boundaries": [B1, ..., Bd]}

B_k is a list of n_{k-1} rows of n_k entries; an entry is a list of terms
[[e1, ..., er], c] with c a nonzero integer. The empty list is zero.
"""

from __future__ import annotations

from dataclasses import dataclass
import json
from pathlib import Path
from typing import Any

from novikov_probe.errors import BoundarySquareNonzero
from novikov_probe.errors import InputError
from novikov_probe.errors import MalformedTerm
from novikov_probe.errors import ShapeMismatch
from novikov_probe.laurent import LaurentPoly
from novikov_probe.laurent import variable_names
from novikov_probe.linalg import PolyMatrix


@dataclass(frozen=True)
class BoundaryComplex:
    """C_0 <- C_1 <- ... <- C_d over Z[H]; boundaries[k-1] is d_k (n_{k-1} x n_k).

    Chains are column vectors; entry (i, j) of d_k is the coefficient of the
    i-th (k-1)-cell in the boundary of the j-th k-cell.
    """

    ring_rank: int
    variables: tuple[str, ...]
    dims: tuple[int, ...]
    boundaries: tuple[PolyMatrix, ...]

    def __post_init__(self) -> None:
        if self.ring_rank < 1:
            raise InputError("ring_rank must be at least 1.")
        if len(self.variables) != self.ring_rank:
            raise ShapeMismatch(
                f"{len(self.variables)} variable names for ring rank {self.ring_rank}."
            )
        if not self.dims:
            raise ShapeMismatch("a chain complex needs at least C_0.")
        if any(n < 0 for n in self.dims):
            raise ShapeMismatch("chain ranks must be nonnegative.")
        if len(self.boundaries) != len(self.dims) - 1:
            raise ShapeMismatch(
                f"{len(self.dims)} chain groups need {len(self.dims) - 1}"
                f" boundary matrices, got {len(self.boundaries)}."
            )
        for k, matrix in enumerate(self.boundaries, start=1):
            expected = (self.dims[k - 1], self.dims[k])
            if matrix.shape != expected:
                raise ShapeMismatch(
                    f"d{k} has shape {matrix.shape}, expected {expected}."
                )
            if matrix.rank != self.ring_rank:
                raise ShapeMismatch(f"d{k} has ring rank {matrix.rank}.")
        self._check_square_zero()

    def _check_square_zero(self) -> None:
        for k in range(1, len(self.boundaries)):
            product = self.boundaries[k - 1] @ self.boundaries[k]
            for i, row in enumerate(product.entries):
                for j, entry in enumerate(row):
                    if entry:
                        raise BoundarySquareNonzero(k, i, j)

    @property
    def top_degree(self) -> int:
        """Largest degree with a nonzero chain group (0 if all vanish)."""
        nonzero = [k for k, n in enumerate(self.dims) if n]
        return nonzero[-1] if nonzero else 0

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.dims))

    def boundary(self, k: int) -> PolyMatrix:
        """d_k, with d_0 and d_{d+1} the empty maps."""
        if 1 <= k <= len(self.boundaries):
            return self.boundaries[k - 1]
        if k == 0:
            return PolyMatrix.zeros(self.ring_rank, 0, self.dims[0])
        return PolyMatrix.zeros(self.ring_rank, self.dims[-1], 0)

    def inverted(self) -> "BoundaryComplex":
        """The complex after t_j -> t_j^-1 (the class -xi)."""
        return BoundaryComplex(
            ring_rank=self.ring_rank,
            variables=self.variables,
            dims=self.dims,
            boundaries=tuple(matrix.inverted() for matrix in self.boundaries),
        )


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _parse_entry(raw: Any, rank: int, where: str) -> LaurentPoly:
    if not isinstance(raw, list):
        raise MalformedTerm(f"{where}: entry must be a list of terms.")
    acc: dict[tuple[int, ...], int] = {}
    for term in raw:
        if not (isinstance(term, list) and len(term) == 2):
            raise MalformedTerm(f"{where}: term must be [[exponents], coefficient].")
        exponent, coeff = term
        if not isinstance(exponent, list) or len(exponent) != rank:
            raise MalformedTerm(f"{where}: exponent vector must have length {rank}.")
        if not all(_is_int(v) for v in exponent):
            raise MalformedTerm(f"{where}: exponents must be integers.")
        if not _is_int(coeff) or coeff == 0:
            raise MalformedTerm(f"{where}: coefficient must be a nonzero integer.")
        key = tuple(exponent)
        if key in acc:
            raise MalformedTerm(f"{where}: repeated exponent {exponent}.")
        acc[key] = coeff
    return LaurentPoly.from_dict(rank, acc)


def _parse_matrix(raw: Any, rank: int, shape: tuple[int, int], k: int) -> PolyMatrix:
    n_rows, n_cols = shape
    if not isinstance(raw, list) or len(raw) != n_rows:
        raise ShapeMismatch(f"B{k} must be a list of {n_rows} rows.")
    rows = []
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != n_cols:
            raise ShapeMismatch(f"B{k} row {i} must have {n_cols} entries.")
        rows.append(
            tuple(
                _parse_entry(entry, rank, f"B{k}[{i}][{j}]")
                for j, entry in enumerate(row)
            )
        )
    return PolyMatrix(rank, n_rows, n_cols, tuple(rows))


def load_complex(document: Any) -> BoundaryComplex:
    """Validate a chain-complex document (d d = 0 enforced).

    Raises:
        ShapeMismatch: Dimensions and matrices disagree.
        MalformedTerm: A term is not [[int, ...], nonzero int].
        BoundarySquareNonzero: Some d_k d_{k+1} entry is nonzero.
    """
    if not isinstance(document, dict):
        raise ShapeMismatch("chain-complex document must be a JSON object.")
    rank = document.get("ring_rank")
    if not _is_int(rank) or rank < 1:
        raise ShapeMismatch("ring_rank must be a positive integer.")
    variables = document.get("variables", variable_names(rank))
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise ShapeMismatch("variables must be a list of names.")
    dims = document.get("dims")
    if not isinstance(dims, list) or not dims or not all(_is_int(n) for n in dims):
        raise ShapeMismatch("dims must be a nonempty list of integers.")
    raw_boundaries = document.get("boundaries", [])
    if not isinstance(raw_boundaries, list) or len(raw_boundaries) != len(dims) - 1:
        raise ShapeMismatch(f"expected {len(dims) - 1} boundary matrices.")
    boundaries = tuple(
        _parse_matrix(raw, rank, (dims[k - 1], dims[k]), k)
        for k, raw in enumerate(raw_boundaries, start=1)
    )
    return BoundaryComplex(
        ring_rank=rank,
        variables=tuple(variables),
        dims=tuple(dims),
        boundaries=boundaries,
    )


def dump_entry(entry: LaurentPoly) -> list[list[object]]:
    return [[list(exponent), coeff] for exponent, coeff in entry.terms]


def dump_complex(complex_: BoundaryComplex) -> dict[str, object]:
    """Inverse of load_complex."""
    return {
        "ring_rank": complex_.ring_rank,
        "variables": list(complex_.variables),
        "dims": list(complex_.dims),
        "boundaries": [
            [[dump_entry(entry) for entry in row] for row in matrix.entries]
            for matrix in complex_.boundaries
        ],
    }


def load_complex_file(path: Path) -> BoundaryComplex:
    if not path.exists():
        raise InputError(f"Input file does not exist: {path}")
    with path.open("r", encoding="utf-8") as handle:
        try:
            document = json.load(handle)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path} is not valid JSON: {exc}") from None
    return load_complex(document)
