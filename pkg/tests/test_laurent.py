from fractions import Fraction

import pytest

from novikov_probe.errors import ExponentOverflow
from novikov_probe.errors import RankMismatch
from novikov_probe.laurent import LaurentPoly
from novikov_probe.laurent import poly_arith


def _t(rank: int = 1) -> LaurentPoly:
    return LaurentPoly.monomial((1,) + (0,) * (rank - 1))


def _c(value: int, rank: int = 1) -> LaurentPoly:
    return LaurentPoly.constant(rank, value)


def test_poly_arith_examples() -> None:
    t = _t()
    t_inv = LaurentPoly.monomial((-1,))

    assert poly_arith(t - _c(2), _c(2), "add") == t
    assert poly_arith(t - _c(1), t + _c(1), "mul") == t * t - _c(1)
    assert poly_arith(t - _c(2), t_inv, "mul") == _c(1) - _c(2) * t_inv
    assert poly_arith(t, t, "sub").is_zero()


def test_rank_mismatch() -> None:
    with pytest.raises(RankMismatch):
        poly_arith(_t(1), _t(2), "add")


def test_canonical_terms_have_no_zeros() -> None:
    poly = LaurentPoly.from_dict(1, {(2,): 3, (0,): 0, (-1,): -1})

    assert poly.terms == (((-1,), -1), ((2,), 3))
    assert len(poly) == 2
    assert not LaurentPoly.zero(2)


def test_exponent_overflow_is_an_error() -> None:
    with pytest.raises(ExponentOverflow):
        LaurentPoly.from_dict(1, {(2**63,): 1})


def test_inverted_and_shift() -> None:
    t = _t()
    poly = t * t - _c(3)

    assert poly.inverted() == LaurentPoly.from_dict(1, {(-2,): 1, (0,): -3})
    assert poly.inverted().inverted() == poly
    assert poly.shift((1,)) == poly * t
    assert poly.min_exponents() == (0,)


def test_exact_division() -> None:
    t = _t()
    numerator = (t * t - _c(1)) * LaurentPoly.monomial((-3,))

    assert numerator.exact_div(t - _c(1)) == (t + _c(1)) * LaurentPoly.monomial((-3,))
    with pytest.raises(ArithmeticError):
        (t + _c(2)).exact_div(t - _c(1))


def test_multivariate_product_and_evaluation() -> None:
    t1 = LaurentPoly.monomial((1, 0))
    t2 = LaurentPoly.monomial((0, -1))
    poly = (t1 + t2) * (t1 - t2)

    assert poly == t1 * t1 - t2 * t2
    assert poly.evaluate([Fraction(2), Fraction(1, 3)]) == 4 - 9
    assert poly.evaluate_mod([2, 3], 7) == (4 - pow(9, -1, 7)) % 7


def test_format() -> None:
    t = _t()

    assert (t - _c(2)).format() == "t - 2"
    assert (_c(2) * t * t - t).format(["s"]) == "2*s^2 - s"
    assert str(LaurentPoly.zero(1)) == "0"
