"""Exact multivariate Laurent polynomials over the integers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal
from typing import Mapping
from typing import Sequence

from sympy.polys.domains import ZZ
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement
from sympy.polys.rings import PolyRing
from sympy.polys.rings import ring

from novikov_probe.errors import ExponentOverflow
from novikov_probe.errors import InputError
from novikov_probe.errors import RankMismatch

Exponent = tuple[int, ...]
ArithOp = Literal["add", "sub", "mul"]

_EXPONENT_LIMIT = 2**63


def variable_names(rank: int) -> list[str]:
    if rank == 1:
        return ["t"]
    return [f"t{index}" for index in range(1, rank + 1)]


@lru_cache(maxsize=None)
def polynomial_ring(rank: int) -> PolyRing:
    """sympy ring Z[t1..tr] used for exact division and gcds."""
    return ring(",".join(f"x{index}" for index in range(rank)), ZZ)[0]


def _check_exponent(exponent: Exponent) -> Exponent:
    for value in exponent:
        if not -_EXPONENT_LIMIT <= value < _EXPONENT_LIMIT:
            raise ExponentOverflow(f"exponent {value} exceeds 64-bit range.")
    return exponent


@dataclass(frozen=True)
class LaurentPoly:
    """Element of Z[t1^+-1, ..., tr^+-1].

    Terms are stored as (exponent vector, coefficient) pairs sorted by
    exponent; no zero coefficients are kept, so equality is structural.
    """

    rank: int
    terms: tuple[tuple[Exponent, int], ...] = ()

    @classmethod
    def from_dict(cls, rank: int, mapping: Mapping[Exponent, int]) -> "LaurentPoly":
        terms = []
        for exponent, coeff in mapping.items():
            if len(exponent) != rank:
                raise RankMismatch(
                    f"exponent {exponent} has length {len(exponent)}, expected {rank}."
                )
            if coeff:
                terms.append((_check_exponent(tuple(exponent)), int(coeff)))
        return cls(rank=rank, terms=tuple(sorted(terms)))

    @classmethod
    def zero(cls, rank: int) -> "LaurentPoly":
        return cls(rank=rank)

    @classmethod
    def constant(cls, rank: int, value: int) -> "LaurentPoly":
        return cls.from_dict(rank, {(0,) * rank: value})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        return cls.from_dict(len(exponent), {tuple(exponent): coeff})

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def _require_rank(self, other: "LaurentPoly") -> None:
        if self.rank != other.rank:
            raise RankMismatch(f"ranks differ: {self.rank} vs {other.rank}.")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._require_rank(other)
        acc = self.as_dict()
        for exponent, coeff in other.terms:
            acc[exponent] = acc.get(exponent, 0) + coeff
        return LaurentPoly.from_dict(self.rank, acc)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.rank, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._require_rank(other)
        acc: dict[Exponent, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                exponent = tuple(a + b for a, b in zip(e1, e2))
                acc[exponent] = acc.get(exponent, 0) + c1 * c2
        return LaurentPoly.from_dict(self.rank, acc)

    def total_degree(self) -> int:
        """Largest l1-norm of an exponent vector (0 for the zero polynomial)."""
        return max((sum(abs(v) for v in e) for e, _ in self.terms), default=0)

    def min_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * self.rank
        return tuple(min(e[i] for e, _ in self.terms) for i in range(self.rank))

    def shift(self, exponent: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial t^exponent."""
        return LaurentPoly.from_dict(
            self.rank,
            {tuple(a + b for a, b in zip(e, exponent)): c for e, c in self.terms},
        )

    def inverted(self) -> "LaurentPoly":
        """Image under the ring automorphism t_j -> t_j^-1."""
        return LaurentPoly.from_dict(
            self.rank, {tuple(-v for v in e): c for e, c in self.terms}
        )

    def coefficients(self) -> list[int]:
        return [c for _, c in self.terms]

    def to_polynomial(self) -> tuple[Exponent, PolyElement]:
        """Split as t^shift * P with P in Z[t] not divisible by any t_j."""
        shift = self.min_exponents()
        ring_ = polynomial_ring(self.rank)
        poly = ring_.from_dict(
            {tuple(v - s for v, s in zip(e, shift)): c for e, c in self.terms}
        )
        return shift, poly

    @classmethod
    def from_polynomial(
        cls, rank: int, poly: PolyElement, shift: Sequence[int] | None = None
    ) -> "LaurentPoly":
        offset = tuple(shift) if shift is not None else (0,) * rank
        return cls.from_dict(
            rank,
            {
                tuple(v + s for v, s in zip(monom, offset)): int(coeff)
                for monom, coeff in poly.items()
            },
        )

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient; raises ArithmeticError when other does not divide self."""
        self._require_rank(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial.")
        if self.is_zero():
            return LaurentPoly.zero(self.rank)
        shift_a, poly_a = self.to_polynomial()
        shift_b, poly_b = other.to_polynomial()
        try:
            quotient = poly_a.exquo(poly_b)
        except ExactQuotientFailed:
            raise ArithmeticError(f"({other}) does not divide ({self}).") from None
        return LaurentPoly.from_polynomial(
            self.rank, quotient, [a - b for a, b in zip(shift_a, shift_b)]
        )

    def evaluate_mod(self, point: Sequence[int], prime: int) -> int:
        """Evaluate at a point of (F_p^*)^r."""
        total = 0
        for exponent, coeff in self.terms:
            value = coeff % prime
            for base, power in zip(point, exponent):
                if power:
                    value = value * pow(base, power, prime) % prime
            total += value
        return total % prime

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        """Evaluate at a point of (Q^*)^r."""
        total = Fraction(0)
        for exponent, coeff in self.terms:
            value = Fraction(coeff)
            for base, power in zip(point, exponent):
                value *= base**power
            total += value
        return total

    def format(self, names: Sequence[str] | None = None) -> str:
        labels = list(names) if names is not None else variable_names(self.rank)
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for exponent, coeff in reversed(self.terms):
            monomial = "*".join(
                name if power == 1 else f"{name}^{power}"
                for name, power in zip(labels, exponent)
                if power
            )
            magnitude = abs(coeff)
            if not monomial:
                body = str(magnitude)
            elif magnitude == 1:
                body = monomial
            else:
                body = f"{magnitude}*{monomial}"
            sign = "-" if coeff < 0 else "+"
            if not pieces:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f"{sign} {body}")
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.format()


def poly_arith(a: LaurentPoly, b: LaurentPoly, op: ArithOp) -> LaurentPoly:
    """Exact add/sub/mul of Laurent polynomials of equal rank.

    Raises:
        RankMismatch: The ranks differ.
    """
    if a.rank != b.rank:
        raise RankMismatch(f"ranks differ: {a.rank} vs {b.rank}.")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise InputError(f"unknown operation {op!r}; expected add, sub or mul.")
