"""Cyclotomic polynomials over Z and multiplicity extraction."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, prod

from .polyseries import IntPolynomial, poly_divexact


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> IntPolynomial:
    """Phi_n, obtained by dividing ``z**n - 1`` by Phi_d for every proper divisor d."""
    if n < 1:
        raise ValueError(f"cyclotomic order must be positive, got {n}")
    num = IntPolynomial.from_roots_of_unity(n)
    for d in divisors(n)[:-1]:
        num, exact = poly_divexact(num, cyclotomic_poly(d))
        if not exact:  # pragma: no cover - would mean Z[z] arithmetic is broken
            raise ArithmeticError(f"Phi_{d} does not divide z^{n}-1")
    return num


def multiplicity_in_poly(p: IntPolynomial, n: int) -> tuple[int, IntPolynomial]:
    """Largest s with Phi_n**s | p, and the cofactor ``p / Phi_n**s``."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite multiplicity")
    phi = cyclotomic_poly(n)
    s = 0
    while True:
        q, exact = poly_divexact(p, phi)
        if not exact:
            return s, p
        p = q
        s += 1


@dataclass(frozen=True)
class CyclotomicIndex:
    """An exponent vector j read against pairwise co-prime bases q."""

    qs: tuple[int, ...]
    j: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.qs) != len(self.j):
            raise ValueError("bases and exponents differ in length")
        if any(q < 2 for q in self.qs):
            raise ValueError("every base must be at least 2")
        if any(e < 0 for e in self.j):
            raise ValueError("exponents must be nonnegative")
        for a in range(len(self.qs)):
            for b in range(a + 1, len(self.qs)):
                if gcd(self.qs[a], self.qs[b]) != 1:
                    raise ValueError(f"bases {self.qs[a]} and {self.qs[b]} are not co-prime")

    @property
    def order(self) -> int:
        return order_of_index(self)

    def poly(self) -> IntPolynomial:
        return cyclotomic_poly(self.order)


def order_of_index(idx: CyclotomicIndex) -> int:
    return prod(q**e for q, e in zip(idx.qs, idx.j))

