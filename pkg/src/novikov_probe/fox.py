"""Fox calculus over Z[F] and the abelianization pi -> H = pi/Ker(xi)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Mapping

from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from novikov_probe.chain import BoundaryComplex
from novikov_probe.errors import DependentRows
from novikov_probe.errors import InputError
from novikov_probe.errors import ShapeMismatch
from novikov_probe.laurent import LaurentPoly
from novikov_probe.laurent import variable_names
from novikov_probe.linalg import PolyMatrix
from novikov_probe.presentation import CharacterClass
from novikov_probe.presentation import FreeWord
from novikov_probe.presentation import Presentation

LOGGER = logging.getLogger(__name__)


def _word_key(item: tuple[FreeWord, int]) -> tuple[int, tuple[tuple[int, int], ...]]:
    word = item[0]
    return (len(word), word.letters)


@dataclass(frozen=True)
class GroupRingElement:
    """Finite Z-combination of freely reduced words (element of Z[F])."""

    terms: tuple[tuple[FreeWord, int], ...] = ()

    @classmethod
    def from_dict(cls, mapping: Mapping[FreeWord, int]) -> "GroupRingElement":
        return cls(tuple(sorted(((w, c) for w, c in mapping.items() if c), key=_word_key)))

    @classmethod
    def of_word(cls, word: FreeWord, coeff: int = 1) -> "GroupRingElement":
        return cls.from_dict({word: coeff})

    def as_dict(self) -> dict[FreeWord, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        acc = self.as_dict()
        for word, coeff in other.terms:
            acc[word] = acc.get(word, 0) + coeff
        return GroupRingElement.from_dict(acc)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(tuple((w, -c) for w, c in self.terms))

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        acc: dict[FreeWord, int] = {}
        for w1, c1 in self.terms:
            for w2, c2 in other.terms:
                word = w1 * w2
                acc[word] = acc.get(word, 0) + c1 * c2
        return GroupRingElement.from_dict(acc)

    def left_multiply(self, word: FreeWord) -> "GroupRingElement":
        return GroupRingElement.of_word(word) * self


def fox_derivative(word: FreeWord, gen: int) -> GroupRingElement:
    """Fox derivative d(word)/d(x_gen) in Z[F].

    Rules: dx/dx = 1, d(x^-1)/dx = -x^-1, dy/dx = 0 for y != x and
    d(uv)/dx = du/dx + u dv/dx, applied letter by letter along the word.
    """
    if gen < 0:
        raise InputError(f"generator index must be nonnegative, got {gen}.")
    acc: dict[FreeWord, int] = {}
    prefix = FreeWord.identity()
    for letter_gen, step in word.unit_letters():
        letter = FreeWord.generator(letter_gen, step)
        if step > 0:
            if letter_gen == gen:
                acc[prefix] = acc.get(prefix, 0) + 1
            prefix = prefix * letter
        else:
            prefix = prefix * letter
            if letter_gen == gen:
                acc[prefix] = acc.get(prefix, 0) - 1
    return GroupRingElement.from_dict(acc)


@dataclass(frozen=True)
class AbelianizationMap:
    """Generator images in a basis of the image lattice H of the character.

    Attributes:
        target_rank: r = rk H.
        images: Exponent vector in Z^r per generator.
        scale: Rank 1 only: positive rational with xi(g) = image(g) * scale,
            so xi(t) > 0.
        basis: Hermite normal form basis of the image lattice (columns).
    """

    target_rank: int
    images: tuple[tuple[int, ...], ...]
    scale: Fraction = Fraction(1)
    basis: tuple[tuple[int, ...], ...] = ()

    @property
    def variables(self) -> list[str]:
        return variable_names(self.target_rank)

    def as_json(self) -> dict[str, object]:
        return {
            "variables": self.variables,
            "images": [list(image) for image in self.images],
            "basis_columns": [list(column) for column in zip(*self.basis)],
            "scale": str(self.scale) if self.target_rank == 1 else None,
        }

    def word_exponent(self, word: FreeWord) -> tuple[int, ...]:
        exponent = [0] * self.target_rank
        for gen, exp in word.letters:
            for index, value in enumerate(self.images[gen]):
                exponent[index] += exp * value
        return tuple(exponent)


def abelianization_map(xi: CharacterClass) -> AbelianizationMap:
    """Image lattice of the integer-scaled rows, re-expressed in its HNF basis."""
    rows = Matrix([list(row) for row in xi.primitive_rows])
    basis = hermite_normal_form(rows)
    if basis.shape != (xi.rank, xi.rank):
        raise DependentRows(
            f"image lattice has rank {basis.shape[1]}, expected {xi.rank}."
        )
    if xi.rank == 1 and basis[0, 0] < 0:
        basis = -basis
    coords = basis.inv() * rows
    images: list[tuple[int, ...]] = []
    for col in range(coords.shape[1]):
        column = []
        for row in range(coords.shape[0]):
            value = coords[row, col]
            if not value.is_integer:
                raise AssertionError("generator image is not in the HNF lattice.")
            column.append(int(value))
        images.append(tuple(column))

    scale = Fraction(1)
    if xi.rank == 1:
        for value, image in zip(xi.rows[0], images):
            if image[0]:
                scale = value / image[0]
                break
    return AbelianizationMap(
        target_rank=xi.rank,
        images=tuple(images),
        scale=scale,
        basis=tuple(tuple(int(v) for v in basis.row(i)) for i in range(basis.rows)),
    )


def abelianize(element: GroupRingElement, mapping: AbelianizationMap) -> LaurentPoly:
    """Push an element of Z[F] to Z[H] = Z[t1^+-1..tr^+-1]."""
    acc: dict[tuple[int, ...], int] = {}
    for word, coeff in element.terms:
        exponent = mapping.word_exponent(word)
        acc[exponent] = acc.get(exponent, 0) + coeff
    return LaurentPoly.from_dict(mapping.target_rank, acc)


def assemble_presentation_complex(
    presentation: Presentation,
    xi: CharacterClass,
    mapping: AbelianizationMap | None = None,
) -> BoundaryComplex:
    """Chain complex of the presentation 2-complex pushed to Z[H].

    dims = (1, g, m); d1 column i is x_i - 1, d2 entry (i, j) is d r_j / d x_i.
    """
    if xi.n_generators != presentation.n_generators:
        raise ShapeMismatch(
            f"class has {xi.n_generators} values for"
            f" {presentation.n_generators} generators."
        )
    amap = mapping if mapping is not None else abelianization_map(xi)
    rank = amap.target_rank
    one = LaurentPoly.constant(rank, 1)

    d1_row = tuple(
        LaurentPoly.monomial(amap.images[i]) - one
        for i in range(presentation.n_generators)
    )
    d1 = PolyMatrix(rank, 1, presentation.n_generators, (d1_row,))

    d2_rows = tuple(
        tuple(
            abelianize(fox_derivative(relator, i), amap)
            for relator in presentation.relators
        )
        for i in range(presentation.n_generators)
    )
    d2 = PolyMatrix(rank, presentation.n_generators, presentation.n_relators, d2_rows)

    LOGGER.info(
        "assembled presentation complex: dims (1, %d, %d), ring rank %d",
        presentation.n_generators,
        presentation.n_relators,
        rank,
    )
    return BoundaryComplex(
        ring_rank=rank,
        variables=tuple(amap.variables),
        dims=(1, presentation.n_generators, presentation.n_relators),
        boundaries=(d1, d2),
    )
