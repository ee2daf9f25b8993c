from fractions import Fraction

import numpy as np
import pytest

from novikov_probe.errors import DependentRows
from novikov_probe.errors import InputError
from novikov_probe.errors import PresentationSyntaxError
from novikov_probe.errors import RelatorNonvanishing
from novikov_probe.errors import ShapeMismatch
from novikov_probe.errors import UnknownGenerator
from novikov_probe.errors import ZeroClass
from novikov_probe.errors import ZeroExponent
from novikov_probe.presentation import FreeWord
from novikov_probe.presentation import format_presentation
from novikov_probe.presentation import free_reduce
from novikov_probe.presentation import parse_assignment
from novikov_probe.presentation import parse_presentation
from novikov_probe.presentation import rows_from_json
from novikov_probe.presentation import validate_character

BS12 = "<a,b | a b a^-1 = b^2>"


def _random_word(rng: np.random.Generator, n_generators: int, length: int) -> FreeWord:
    return FreeWord(
        tuple(
            (int(rng.integers(n_generators)), int(rng.choice([-2, -1, 1, 2])))
            for _ in range(length)
        )
    )


def test_parse_baumslag_solitar() -> None:
    pres = parse_presentation(BS12)

    assert pres.generators == ("a", "b")
    assert pres.relators == (FreeWord(((0, 1), (1, 1), (0, -1), (1, -2))),)


def test_parse_free_group_and_commutator() -> None:
    free = parse_presentation("<a,b | >")
    z2 = parse_presentation("<a,b | a b a^-1 b^-1>")

    assert free.n_relators == 0
    assert free.deficiency == 2
    assert z2.relators[0].letters == ((0, 1), (1, 1), (0, -1), (1, -1))
    assert z2.euler_characteristic == 0


def test_star_and_whitespace_are_separators() -> None:
    spaced = parse_presentation("<a, b | a b a^-1 b^-1>")
    starred = parse_presentation("<a,b|a*b*a^-1*b^-1>")

    assert spaced == starred


def test_parse_errors_carry_positions() -> None:
    with pytest.raises(UnknownGenerator):
        parse_presentation("<a,b | a c>")
    with pytest.raises(ZeroExponent):
        parse_presentation("<a,b | a^0 b>")
    with pytest.raises(PresentationSyntaxError) as excinfo:
        parse_presentation("<a,b | a b")
    assert excinfo.value.position == len("<a,b | a b")
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("<a,b | a ? b>")
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("<a,a | >")


def test_free_reduce_examples() -> None:
    a, b = 0, 1
    word = FreeWord(((a, 1), (b, 1), (b, -1), (a, 1)))
    cancel = FreeWord(((a, 1), (a, -1)))
    reduced = FreeWord(((a, 1), (b, 1), (a, -1), (b, -2)))

    assert free_reduce(word) == FreeWord(((a, 2),))
    assert free_reduce(cancel).is_identity()
    assert free_reduce(reduced) == reduced


def test_free_reduce_is_compatible_with_products() -> None:
    rng = np.random.default_rng(7)
    for _ in range(200):
        u = _random_word(rng, 3, int(rng.integers(0, 8)))
        v = _random_word(rng, 3, int(rng.integers(0, 8)))

        joined = free_reduce(FreeWord(u.letters + v.letters))
        assert joined == free_reduce(FreeWord(free_reduce(u).letters + free_reduce(v).letters))
        assert (u * u.inverse()).is_identity()


def test_parse_print_parse_is_idempotent() -> None:
    for text in (BS12, "<a,b | >", "<a1, b1, a2, b2 | a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1>"):
        canonical = format_presentation(parse_presentation(text))

        assert format_presentation(parse_presentation(canonical)) == canonical
        assert parse_presentation(canonical) == parse_presentation(text)


def test_validate_character_accepts_and_scales() -> None:
    pres = parse_presentation(BS12)

    xi = validate_character(pres, [[Fraction(1, 2), 0]])

    assert xi.rank == 1
    assert xi.primitive_rows == ((1, 0),)


def test_validate_character_reads_floats_as_decimals() -> None:
    pres = parse_presentation("<a,b,c | a b a^-1 b^-1>")

    xi = validate_character(pres, [[0.5, 0, 0], [0, 0.1, -1.25]])

    assert xi.rows == ((Fraction(1, 2), 0, 0), (0, Fraction(1, 10), Fraction(-5, 4)))
    assert xi.primitive_rows == ((1, 0, 0), (0, 2, -25))
    with pytest.raises(InputError):
        validate_character(pres, [[float("inf"), 0, 0]])
    with pytest.raises(InputError):
        validate_character(pres, [[float("nan"), 1, 0]])


def test_validate_character_rejections() -> None:
    pres = parse_presentation(BS12)

    with pytest.raises(RelatorNonvanishing) as excinfo:
        validate_character(pres, [[0, 1]])
    assert excinfo.value.relator_index == 0
    assert excinfo.value.row_index == 0
    with pytest.raises(ZeroClass):
        validate_character(pres, [[0, 0]])
    with pytest.raises(ShapeMismatch):
        validate_character(pres, [[1]])
    free = parse_presentation("<a,b | >")
    with pytest.raises(DependentRows):
        validate_character(free, [[1, 1], [2, 2]])


def test_assignment_and_json_rows() -> None:
    pres = parse_presentation("<a,b,c | a b a^-1 b^-1>")

    assert parse_assignment(pres, "a=1, c=-1/2") == [1, 0, Fraction(-1, 2)]
    assert rows_from_json(pres, [{"b": 2}, [1, 0, 0]]) == [[0, 2, 0], [1, 0, 0]]
    with pytest.raises(UnknownGenerator):
        parse_assignment(pres, "d=1")


def test_character_lattice_basis() -> None:
    trefoil = parse_presentation("<a,b | a^2 = b^3>")
    finite = parse_presentation("<a,b | a^2 = b^3, a b>")

    assert trefoil.first_betti_number() == 1
    assert trefoil.character_lattice_basis() == [(3, 2)]
    assert finite.first_betti_number() == 0
    assert finite.character_lattice_basis() == []
