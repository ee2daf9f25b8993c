import json

import pytest

from novikov_probe.chain import dump_complex
from novikov_probe.chain import load_complex
from novikov_probe.chain import load_complex_file
from novikov_probe.errors import BoundarySquareNonzero
from novikov_probe.errors import InputError
from novikov_probe.errors import MalformedTerm
from novikov_probe.errors import ShapeMismatch
from novikov_probe.fox import assemble_presentation_complex
from novikov_probe.laurent import LaurentPoly
from novikov_probe.presentation import parse_presentation
from novikov_probe.presentation import validate_character


def _bs_document() -> dict[str, object]:
    return {
        "ring_rank": 1,
        "variables": ["t"],
        "dims": [1, 2, 1],
        "boundaries": [
            [[[[[0], -1], [[1], 1]], []]],
            [[[]], [[[[0], -2], [[1], 1]]]],
        ],
    }


def _bs_complex():
    pres = parse_presentation("<a,b | a b a^-1 = b^2>")
    return assemble_presentation_complex(pres, validate_character(pres, [[1, 0]]))


def test_load_matches_assembled_complex() -> None:
    loaded = load_complex(_bs_document())
    built = _bs_complex()

    assert loaded.ring_rank == built.ring_rank
    assert loaded.dims == built.dims
    assert loaded.boundaries == built.boundaries
    assert loaded == built


def test_dump_then_load_round_trip() -> None:
    built = _bs_complex()

    assert load_complex(dump_complex(built)) == built
    assert dump_complex(built) == _bs_document()


def test_square_nonzero_is_reported() -> None:
    document = _bs_document()
    document["boundaries"][1] = [[[[[0], 1]]], [[]]]

    with pytest.raises(BoundarySquareNonzero) as excinfo:
        load_complex(document)
    assert (excinfo.value.degree, excinfo.value.row, excinfo.value.col) == (1, 0, 0)


def test_shape_and_term_errors() -> None:
    bad_dims = _bs_document()
    bad_dims["dims"] = [1, 3, 1]
    bad_term = _bs_document()
    bad_term["boundaries"][0][0][0] = [[[1], 0]]
    repeated = _bs_document()
    repeated["boundaries"][0][0][0] = [[[1], 1], [[1], 2]]
    bad_exponent = _bs_document()
    bad_exponent["boundaries"][0][0][0] = [[[1, 2], 1]]

    with pytest.raises(ShapeMismatch):
        load_complex(bad_dims)
    with pytest.raises(MalformedTerm):
        load_complex(bad_term)
    with pytest.raises(MalformedTerm):
        load_complex(repeated)
    with pytest.raises(MalformedTerm):
        load_complex(bad_exponent)
    with pytest.raises(ShapeMismatch):
        load_complex([1, 2])


def test_boundary_padding_and_euler() -> None:
    complex_ = _bs_complex()

    assert complex_.boundary(0).shape == (0, 1)
    assert complex_.boundary(3).shape == (1, 0)
    assert complex_.top_degree == 2
    assert complex_.euler_characteristic == 0


def test_inverted_complex_swaps_t() -> None:
    inverted = _bs_complex().inverted()

    assert inverted.boundaries[1].entries[1][0] == LaurentPoly.from_dict(1, {(-1,): 1, (0,): -2})
    assert inverted.inverted() == _bs_complex()


def test_load_complex_file(tmp_path) -> None:
    path = tmp_path / "bs12.json"
    path.write_text(json.dumps(_bs_document()), encoding="utf-8")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")

    assert load_complex_file(path) == _bs_complex()
    with pytest.raises(InputError):
        load_complex_file(tmp_path / "missing.json")
    with pytest.raises(InputError):
        load_complex_file(broken)
