import numpy as np
import pytest
from sympy import Integer
from sympy import symbols
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from novikov_probe.errors import SizeExceeded
from novikov_probe.laurent import LaurentPoly
from novikov_probe.linalg import PolyMatrix
from novikov_probe.linalg import bareiss_det
from novikov_probe.linalg import exact_rank
from novikov_probe.linalg import minors
from novikov_probe.linalg import modular_rank
from novikov_probe.linalg import primes_near_2_31
from novikov_probe.linalg import rank_fraction_field
from novikov_probe.options import EngineOptions


def _t() -> LaurentPoly:
    return LaurentPoly.monomial((1,))


def _c(value: int, rank: int = 1) -> LaurentPoly:
    return LaurentPoly.constant(rank, value)


def _matrix(rows: list[list[LaurentPoly]], rank: int = 1) -> PolyMatrix:
    return PolyMatrix.from_rows(rank, rows)


def _random_entry(rng: np.random.Generator, rank: int) -> LaurentPoly:
    if rng.random() < 0.4:
        return LaurentPoly.zero(rank)
    terms = {}
    for _ in range(int(rng.integers(1, 3))):
        exponent = tuple(int(rng.integers(-1, 2)) for _ in range(rank))
        terms[exponent] = int(rng.choice([-3, -2, -1, 1, 2, 3]))
    return LaurentPoly.from_dict(rank, terms)


def _random_matrix(rng: np.random.Generator) -> PolyMatrix:
    rank = int(rng.integers(1, 4))
    n_rows, n_cols = int(rng.integers(1, 7)), int(rng.integers(1, 7))
    if rng.random() < 0.3:
        inner = int(rng.integers(1, 3))
        left = PolyMatrix.from_rows(
            rank, [[_random_entry(rng, rank) for _ in range(inner)] for _ in range(n_rows)]
        )
        right = PolyMatrix.from_rows(
            rank, [[_random_entry(rng, rank) for _ in range(n_cols)] for _ in range(inner)]
        )
        return left @ right
    return PolyMatrix.from_rows(
        rank, [[_random_entry(rng, rank) for _ in range(n_cols)] for _ in range(n_rows)]
    )


def _oracle_rank(matrix: PolyMatrix) -> int:
    names = symbols(f"x0:{matrix.rank}")
    field = QQ.frac_field(*names)
    rows = []
    for row in matrix.entries:
        converted = []
        for entry in row:
            expr = Integer(0)
            for exponent, coeff in entry.terms:
                term = Integer(coeff)
                for name, power in zip(names, exponent):
                    term *= name**power
                expr += term
            converted.append(field.from_sympy(expr))
        rows.append(converted)
    return DomainMatrix(rows, matrix.shape, field).rank()


def test_rank_examples() -> None:
    t = _t()
    zero = LaurentPoly.zero(1)

    assert rank_fraction_field(_matrix([[zero, t - _c(2)]])).value == 1
    assert rank_fraction_field(PolyMatrix.zeros(1, 3, 2)).value == 0
    assert rank_fraction_field(_matrix([[t - _c(1), zero], [zero, t - _c(1)]])).value == 2
    assert rank_fraction_field(PolyMatrix.zeros(1, 0, 4)).value == 0


def test_auto_method_confirms_small_matrices() -> None:
    t = _t()
    matrix = _matrix([[t, _c(1)], [_c(1), t]])

    confirmed = rank_fraction_field(matrix, "auto")
    sampled = rank_fraction_field(matrix, "auto", EngineOptions(exact_size_bound=0))

    assert confirmed.method == "exact"
    assert confirmed.confirmed
    assert len(confirmed.certificate) == 15
    assert sampled.method == "modular-sampled"
    assert not sampled.confirmed
    assert sampled.value == 2


def test_bareiss_determinant() -> None:
    t = _t()
    t_inv = LaurentPoly.monomial((-1,))

    assert bareiss_det(_matrix([[t, _c(1)], [_c(1), t]])) == t * t - _c(1)
    assert bareiss_det(_matrix([[t_inv, _c(1)], [_c(1), t]])) == LaurentPoly.zero(1)
    assert bareiss_det(_matrix([[_c(0), _c(1)], [_c(1), _c(0)]])) == _c(-1)


def test_minor_examples() -> None:
    t = _t()
    zero = LaurentPoly.zero(1)
    column = _matrix([[zero], [t - _c(2)]])
    identity = _matrix([[_c(1), zero], [zero, _c(1)]])

    assert minors(column, 1) == [t - _c(2)]
    assert minors(identity, 2) == [_c(1)]
    assert minors(column, 2) == []
    with pytest.raises(SizeExceeded):
        minors(identity, 1, cap=3)


def test_modular_rank_on_jump_point() -> None:
    t = _t()
    zero = LaurentPoly.zero(1)
    matrix = _matrix([[t - _c(1), zero], [zero, t - _c(2)]])
    prime = primes_near_2_31(1)[0]

    at_jump = modular_rank(matrix.evaluate_mod([1], prime), prime)

    assert at_jump == 1
    assert at_jump <= exact_rank(matrix) == 2
    assert modular_rank(np.zeros((3, 0), dtype=np.int64), prime) == 0


@pytest.mark.slow
def test_exact_rank_matches_fraction_field_oracle() -> None:
    rng = np.random.default_rng(20240)
    for _ in range(500):
        matrix = _random_matrix(rng)
        exact = rank_fraction_field(matrix, "exact").value
        modular = rank_fraction_field(matrix, "modular").value

        assert exact == _oracle_rank(matrix)
        assert modular <= exact
        assert modular == exact
