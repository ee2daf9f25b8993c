from fractions import Fraction

import pytest

from novikov_probe.errors import AllZero
from novikov_probe.errors import RankTooHigh
from novikov_probe.laurent import LaurentPoly
from novikov_probe.univariate import newton_slopes
from novikov_probe.univariate import positive_root_valuations
from novikov_probe.univariate import univariate_gcd_data


def _poly(mapping: dict[int, int]) -> LaurentPoly:
    return LaurentPoly.from_dict(1, {(power,): coeff for power, coeff in mapping.items()})


def test_gcd_data_examples() -> None:
    single = univariate_gcd_data([_poly({1: 1, 0: -2})])
    pair = univariate_gcd_data([_poly({0: 2}), _poly({1: 1, 0: 2})])
    content = univariate_gcd_data([_poly({1: 2, 0: 2}), _poly({1: 4, 0: 4})])

    assert (single.common_content, single.g, single.g0) == (1, _poly({1: 1, 0: -2}), 2)
    assert single.torsion_primes == (2,)
    assert not single.is_unit
    assert (pair.common_content, pair.g, pair.g0) == (1, _poly({0: 1}), 1)
    assert pair.is_unit
    assert (content.common_content, content.g, content.g0) == (2, _poly({1: 1, 0: 1}), 1)
    assert not content.is_unit


def test_gcd_data_ignores_unit_monomials() -> None:
    base = [_poly({2: 3, 0: -6}), _poly({1: 1, 0: -2})]
    moved = [base[0] * _poly({-3: -1}), base[1] * _poly({5: 1})]

    assert univariate_gcd_data(base) == univariate_gcd_data(moved)


def test_gcd_data_errors() -> None:
    with pytest.raises(AllZero):
        univariate_gcd_data([LaurentPoly.zero(1)])
    with pytest.raises(RankTooHigh):
        univariate_gcd_data([LaurentPoly.constant(2, 1)])


def test_newton_slopes() -> None:
    # 4 - 6 s + 2 s^2 = 2 (s - 1)(s - 2): valuations 2-adically 1 and 0.
    g = _poly({0: 4, 1: -6, 2: 2})

    assert newton_slopes(g, 2) == [(Fraction(-1), 1), (Fraction(0), 1)]
    assert positive_root_valuations(g, 2) == [Fraction(1)]
    assert positive_root_valuations(g, 3) == []


def test_torsion_primes_have_small_roots() -> None:
    data = univariate_gcd_data([_poly({0: 12, 1: 1}), _poly({0: 24, 1: 2, 2: 12, 3: 1})])

    assert data.g0 == 12
    assert data.torsion_primes == (2, 3)
    for prime in data.torsion_primes:
        assert positive_root_valuations(data.g, prime)
    assert data.valuations == {2: [2], 3: [1]}
