"""Group presentations, free-group words and character classes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from math import isfinite
from math import lcm
import re
from typing import Iterable
from typing import Iterator
from typing import Sequence

from sympy import Matrix
from sympy import Rational

from novikov_probe.errors import DependentRows
from novikov_probe.errors import InputError
from novikov_probe.errors import PresentationSyntaxError
from novikov_probe.errors import RelatorNonvanishing
from novikov_probe.errors import ShapeMismatch
from novikov_probe.errors import UnknownGenerator
from novikov_probe.errors import ZeroClass
from novikov_probe.errors import ZeroExponent

Letter = tuple[int, int]

_TOKEN_RE = re.compile(
    r"(?P<space>[\s*]+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<int>[+-]?\d+)"
    r"|(?P<punct>[<>|,=^])"
)


@dataclass(frozen=True)
class FreeWord:
    """Word in a free group as (generator index, nonzero exponent) syllables."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        for gen, exp in self.letters:
            if gen < 0:
                raise InputError(f"generator index must be nonnegative, got {gen}.")
            if exp == 0:
                raise ZeroExponent(f"zero exponent on generator index {gen}.")

    @classmethod
    def identity(cls) -> "FreeWord":
        return cls(())

    @classmethod
    def generator(cls, index: int, exponent: int = 1) -> "FreeWord":
        return cls(((index, exponent),))

    def __len__(self) -> int:
        return sum(abs(exp) for _, exp in self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return free_reduce(FreeWord(self.letters + other.letters))

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((gen, -exp) for gen, exp in reversed(self.letters)))

    def is_identity(self) -> bool:
        return not self.letters

    def is_reduced(self) -> bool:
        return all(
            left[0] != right[0] for left, right in zip(self.letters, self.letters[1:])
        )

    def unit_letters(self) -> Iterator[Letter]:
        """Yield the word one letter (exponent +1 or -1) at a time."""
        for gen, exp in self.letters:
            step = 1 if exp > 0 else -1
            for _ in range(abs(exp)):
                yield gen, step

    def exponent_sums(self, n_generators: int) -> list[int]:
        sums = [0] * n_generators
        for gen, exp in self.letters:
            sums[gen] += exp
        return sums

    def max_generator(self) -> int:
        return max((gen for gen, _ in self.letters), default=-1)


def free_reduce(word: FreeWord) -> FreeWord:
    """Return the canonical freely reduced form of a word."""
    reduced: list[Letter] = []
    for gen, exp in word.letters:
        if reduced and reduced[-1][0] == gen:
            merged = reduced[-1][1] + exp
            reduced.pop()
            if merged != 0:
                reduced.append((gen, merged))
        else:
            reduced.append((gen, exp))
    return FreeWord(tuple(reduced))


@dataclass(frozen=True)
class Presentation:
    """Finite presentation; relators are freely reduced, not cyclically reduced."""

    generators: tuple[str, ...]
    relators: tuple[FreeWord, ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.generators)) != len(self.generators):
            raise InputError("generator names must be distinct.")
        for index, relator in enumerate(self.relators):
            if relator.max_generator() >= len(self.generators):
                raise UnknownGenerator(
                    f"relator {index} uses generator index {relator.max_generator()}"
                    f" but only {len(self.generators)} generators exist."
                )
            if not relator.is_reduced():
                raise InputError(f"relator {index} is not freely reduced.")

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    @property
    def n_relators(self) -> int:
        return len(self.relators)

    @property
    def deficiency(self) -> int:
        return self.n_generators - self.n_relators

    @property
    def euler_characteristic(self) -> int:
        """Euler characteristic 1 - g + m of the presentation 2-complex."""
        return 1 - self.n_generators + self.n_relators

    def index_of(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise UnknownGenerator(f"unknown generator: {name!r}") from None

    def exponent_sum_matrix(self) -> list[list[int]]:
        """Rows are the abelianized relators (m x g)."""
        return [relator.exponent_sums(self.n_generators) for relator in self.relators]

    def first_betti_number(self) -> int:
        """Rank of H_1 of the presented group."""
        if not self.relators:
            return self.n_generators
        return self.n_generators - Matrix(self.exponent_sum_matrix()).rank()

    def character_lattice_basis(self) -> list[tuple[int, ...]]:
        """Primitive integer characters spanning Hom(pi, Q)."""
        if not self.relators:
            return [
                tuple(1 if i == j else 0 for j in range(self.n_generators))
                for i in range(self.n_generators)
            ]
        kernel = Matrix(self.exponent_sum_matrix()).nullspace()
        return [primitive_row([Fraction(int(v.p), int(v.q)) for v in vec]) for vec in kernel]


class _Tokens:
    """One-pass token stream over presentation text."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.items: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            match = _TOKEN_RE.match(text, pos)
            if match is None:
                raise PresentationSyntaxError(
                    f"unexpected character {text[pos]!r}", pos
                )
            kind = match.lastgroup or ""
            if kind != "space":
                self.items.append((kind, match.group(), pos))
            pos = match.end()
        self.index = 0

    def peek(self) -> tuple[str, str, int]:
        if self.index < len(self.items):
            return self.items[self.index]
        return ("end", "", len(self.text))

    def take(self) -> tuple[str, str, int]:
        item = self.peek()
        self.index += 1
        return item

    def expect(self, value: str) -> int:
        kind, text, pos = self.take()
        if text != value or kind == "end":
            found = text if kind != "end" else "end of input"
            raise PresentationSyntaxError(f"expected {value!r}, found {found!r}", pos)
        return pos


def _parse_word(tokens: _Tokens, generators: Sequence[str]) -> FreeWord:
    letters: list[Letter] = []
    while True:
        kind, text, pos = tokens.peek()
        if kind == "int" and text == "1":
            tokens.take()
            continue
        if kind != "ident":
            break
        tokens.take()
        if text not in generators:
            raise UnknownGenerator(f"unknown generator {text!r} at position {pos}")
        exponent = 1
        if tokens.peek()[1] == "^":
            tokens.take()
            exp_kind, exp_text, exp_pos = tokens.take()
            if exp_kind != "int":
                raise PresentationSyntaxError("expected integer exponent", exp_pos)
            exponent = int(exp_text)
            if exponent == 0:
                raise ZeroExponent(f"zero exponent at position {exp_pos}")
        letters.append((generators.index(text), exponent))
    return free_reduce(FreeWord(tuple(letters)))


def _parse_side(tokens: _Tokens, generators: Sequence[str]) -> FreeWord:
    before = tokens.index
    start = tokens.peek()[2]
    word = _parse_word(tokens, generators)
    if tokens.index == before:
        raise PresentationSyntaxError("empty relator word", start)
    return word


def parse_presentation(text: str) -> Presentation:
    """Parse `<g1, g2, ... | w1, w2, ...>` into a validated Presentation.

    Raises:
        PresentationSyntaxError: Malformed text (position-annotated).
        UnknownGenerator: A relator uses an undeclared generator.
        ZeroExponent: A `gen^0` token.
    """
    tokens = _Tokens(text)
    tokens.expect("<")
    generators: list[str] = []
    while True:
        kind, name, pos = tokens.take()
        if kind != "ident":
            raise PresentationSyntaxError("expected generator name", pos)
        if name in generators:
            raise PresentationSyntaxError(f"duplicate generator {name!r}", pos)
        generators.append(name)
        kind, sep, pos = tokens.take()
        if sep == "|":
            break
        if sep != ",":
            raise PresentationSyntaxError("expected ',' or '|'", pos)

    relators: list[FreeWord] = []
    if tokens.peek()[1] != ">":
        while True:
            left = _parse_side(tokens, generators)
            if tokens.peek()[1] == "=":
                tokens.take()
                right = _parse_side(tokens, generators)
                left = left * right.inverse()
            relators.append(left)
            kind, sep, pos = tokens.take()
            if sep == ">":
                break
            if sep != ",":
                raise PresentationSyntaxError("expected ',' or '>'", pos)
    else:
        tokens.take()

    kind, _, pos = tokens.peek()
    if kind != "end":
        raise PresentationSyntaxError("trailing input", pos)
    return Presentation(generators=tuple(generators), relators=tuple(relators))


def format_word(word: FreeWord, generators: Sequence[str]) -> str:
    if word.is_identity():
        return "1"
    parts = []
    for gen, exp in word.letters:
        name = generators[gen]
        parts.append(name if exp == 1 else f"{name}^{exp}")
    return " ".join(parts)


def format_presentation(presentation: Presentation) -> str:
    """Pretty-print in the grammar accepted by parse_presentation."""
    gens = ", ".join(presentation.generators)
    rels = ", ".join(
        format_word(relator, presentation.generators)
        for relator in presentation.relators
    )
    return f"<{gens} | {rels}>" if rels else f"<{gens} | >"


def primitive_row(values: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a nonzero rational vector by a positive factor to a primitive integer vector."""
    denominator = lcm(*(value.denominator for value in values)) if values else 1
    integers = [int(value * denominator) for value in values]
    common = gcd(*integers)
    if common == 0:
        raise ZeroClass("cannot scale the zero vector.")
    return tuple(value // common for value in integers)


def _as_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except ValueError:
            raise InputError(f"not a rational number: {value!r}") from None
    if isinstance(value, float):
        if not isfinite(value):
            raise InputError(f"character values must be finite, got {value!r}")
        # Decimal reading: 0.1 is 1/10, not the nearest binary fraction.
        return Fraction(str(value))
    raise InputError(
        f"character values must be int, float, str or Fraction, got {value!r}"
    )


@dataclass(frozen=True)
class CharacterClass:
    """Rational characters pi -> Q; r rows jointly encode Ker(xi).

    Attributes:
        rows: Rational rows as given (r x g).
        primitive_rows: Rows scaled by positive factors to primitive integers.
    """

    rows: tuple[tuple[Fraction, ...], ...]
    primitive_rows: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def n_generators(self) -> int:
        return len(self.rows[0])

    def negated(self) -> "CharacterClass":
        return CharacterClass(
            rows=tuple(tuple(-value for value in row) for row in self.rows),
            primitive_rows=tuple(
                tuple(-value for value in row) for row in self.primitive_rows
            ),
        )

    def as_json(self) -> list[list[int]]:
        return [list(row) for row in self.primitive_rows]


def validate_character(
    presentation: Presentation,
    rows: Sequence[Sequence[object]],
) -> CharacterClass:
    """Validate rational character rows against a presentation.

    Raises:
        ShapeMismatch: A row does not have one value per generator.
        ZeroClass: No rows, or an all-zero row.
        RelatorNonvanishing: A row is nonzero on an abelianized relator.
        DependentRows: Rows are Q-linearly dependent.
    """
    if not rows:
        raise ZeroClass("at least one nonzero character row is required.")
    parsed: list[tuple[Fraction, ...]] = []
    for row_index, row in enumerate(rows):
        if len(row) != presentation.n_generators:
            raise ShapeMismatch(
                f"row {row_index} has {len(row)} values, expected"
                f" {presentation.n_generators}."
            )
        values = tuple(_as_fraction(value) for value in row)
        if not any(values):
            raise ZeroClass(f"row {row_index} is zero; xi must be nonzero.")
        parsed.append(values)

    for relator_index, sums in enumerate(presentation.exponent_sum_matrix()):
        for row_index, values in enumerate(parsed):
            value = sum((v * s for v, s in zip(values, sums)), Fraction(0))
            if value != 0:
                raise RelatorNonvanishing(relator_index, row_index, value)

    rational = Matrix([[Rational(v.numerator, v.denominator) for v in row] for row in parsed])
    if rational.rank() != len(parsed):
        raise DependentRows("character rows must be linearly independent over Q.")

    return CharacterClass(
        rows=tuple(parsed),
        primitive_rows=tuple(primitive_row(row) for row in parsed),
    )


def parse_assignment(presentation: Presentation, text: str) -> list[Fraction]:
    """Parse `a=1,b=-1/2` into one row; unnamed generators take 0."""
    row = [Fraction(0)] * presentation.n_generators
    for item in filter(None, (part.strip() for part in text.split(","))):
        if "=" not in item:
            raise InputError(f"expected name=value, got {item!r}.")
        name, value = (piece.strip() for piece in item.split("=", 1))
        row[presentation.index_of(name)] = _as_fraction(value)
    return row


def rows_from_json(
    presentation: Presentation | None,
    document: Iterable[object],
) -> list[list[object]]:
    """Accept rows as lists of values or as {generator: value} mappings."""
    rows: list[list[object]] = []
    for entry in document:
        if isinstance(entry, dict):
            if presentation is None:
                raise InputError("named character rows need a presentation.")
            row: list[object] = [0] * presentation.n_generators
            for name, value in entry.items():
                row[presentation.index_of(str(name))] = value
            rows.append(row)
        elif isinstance(entry, list):
            rows.append(list(entry))
        else:
            raise InputError(f"character row must be a list or object, got {entry!r}")
    return rows
