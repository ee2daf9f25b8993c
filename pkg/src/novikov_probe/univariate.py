"""Univariate tools for unit tests in Z((s)): content, gcd, Newton slopes."""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from math import gcd
from typing import Sequence

from sympy import factorint
from sympy import multiplicity

from novikov_probe.errors import AllZero
from novikov_probe.errors import RankTooHigh
from novikov_probe.laurent import LaurentPoly


@dataclass(frozen=True)
class GcdData:
    """Gcd data of Laurent polynomials in one variable s.

    Attributes:
        common_content: gcd of every integer coefficient of every f_i.
        g: Primitive Q[s]-gcd of the s-power-stripped f_i, positive leading
            coefficient.
        g0: |g(0)|.
        torsion_primes: Primes dividing g0; for each, g has a root of
            positive p-adic valuation.
        valuations: Per torsion prime, the valuations of those roots.
    """

    common_content: int
    g: LaurentPoly
    g0: int
    torsion_primes: tuple[int, ...]
    valuations: dict[int, list[Fraction]] = field(default_factory=dict)

    @property
    def is_unit(self) -> bool:
        return self.common_content == 1 and self.g0 == 1

    def as_json(self) -> dict[str, object]:
        return {
            "common_content": self.common_content,
            "g": self.g.format(["s"]),
            "g0": self.g0,
            "torsion_primes": list(self.torsion_primes),
            "valuations": {
                str(prime): [str(v) for v in values]
                for prime, values in self.valuations.items()
            },
        }


def _require_univariate(polys: Sequence[LaurentPoly]) -> None:
    for poly in polys:
        if poly.rank != 1:
            raise RankTooHigh(f"expected univariate input, got rank {poly.rank}.")


def univariate_gcd_data(fs: Sequence[LaurentPoly]) -> GcdData:
    """Content, stripped primitive gcd and |g(0)| of univariate Laurent polys.

    Raises:
        AllZero: Every f_i is zero (or the list is empty).
    """
    _require_univariate(fs)
    nonzero = [f for f in fs if f]
    if not nonzero:
        raise AllZero("gcd data needs at least one nonzero polynomial.")

    content = gcd(*(c for f in nonzero for c in f.coefficients()))

    g = None
    for f in nonzero:
        _, poly = f.to_polynomial()
        g = poly if g is None else g.gcd(poly)
    assert g is not None
    _, g = g.primitive()
    if g.LC < 0:
        g = -g
    g_poly = LaurentPoly.from_polynomial(1, g)
    g0 = abs(g_poly.as_dict().get((0,), 0))
    if g0 == 0:
        raise AssertionError("stripped gcd vanishes at s = 0.")
    primes = tuple(sorted(int(p) for p in factorint(g0)))
    return GcdData(
        common_content=content,
        g=g_poly,
        g0=g0,
        torsion_primes=primes,
        valuations={p: positive_root_valuations(g_poly, p) for p in primes},
    )


def newton_slopes(g: LaurentPoly, prime: int) -> list[tuple[Fraction, int]]:
    """Slopes (with horizontal lengths) of the lower p-adic Newton polygon.

    A segment of slope -v and length n accounts for n roots of valuation v.
    """
    _require_univariate([g])
    points = sorted(
        (exponent[0], multiplicity(prime, abs(coeff))) for exponent, coeff in g.terms
    )
    hull: list[tuple[int, int]] = []
    for point in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (point[1] - y1) - (y2 - y1) * (point[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(point)
    return [
        (Fraction(y2 - y1, x2 - x1), x2 - x1)
        for (x1, y1), (x2, y2) in zip(hull, hull[1:])
    ]


def positive_root_valuations(g: LaurentPoly, prime: int) -> list[Fraction]:
    """Valuations of roots of g in the open p-adic unit disc, with multiplicity."""
    valuations: list[Fraction] = []
    for slope, length in newton_slopes(g, prime):
        if slope < 0:
            valuations.extend([-slope] * length)
    return valuations
