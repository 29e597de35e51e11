"""Exact integer polynomials and truncated power series.

Polynomials are stored constant term first with no trailing zeros, so the
zero polynomial is the empty tuple.  Truncated series carry an explicit
order ``N``: coefficients past ``N`` are unknown, and asking for them is an
error rather than a silent zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence


class TruncationError(ValueError):
    """Raised when a coefficient beyond a series' truncation order is consumed."""


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        canon = _strip(int(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", canon)

    @classmethod
    def from_roots_of_unity(cls, n: int) -> IntPolynomial:
        """``z**n - 1``."""
        if n < 1:
            raise ValueError("n must be positive")
        return cls((-1,) + (0,) * (n - 1) + (1,))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> IntPolynomial:
        return cls((0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(tuple(self[i] + other[i] for i in range(n)))

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        return poly_mul(self, other)

    def __pow__(self, e: int) -> IntPolynomial:
        if e < 0:
            raise ValueError("negative exponent")
        out = IntPolynomial((1,))
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def substitute_power(self, k: int) -> IntPolynomial:
        """``P(z**k)``."""
        if k < 1:
            raise ValueError("k must be positive")
        out = [0] * (k * self.degree + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return IntPolynomial(tuple(out))

    def to_json(self) -> str:
        return json.dumps([str(c) for c in self.coeffs])

    @classmethod
    def from_json(cls, text: str) -> IntPolynomial:
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("polynomial JSON must be an array of coefficients")
        return cls(tuple(int(c) for c in data))

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"


ONE = IntPolynomial((1,))


def poly_mul(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    if a.is_zero() or b.is_zero():
        return IntPolynomial()
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    bc = b.coeffs
    for i, x in enumerate(a.coeffs):
        if x == 0:
            continue
        for j, y in enumerate(bc):
            out[i + j] += x * y
    return IntPolynomial(tuple(out))


def poly_divmod(num: IntPolynomial, den: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial] | None:
    """Integer long division.  Returns ``None`` if a quotient digit is not integral."""
    if den.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(num.coeffs)
    dd = den.degree
    lead = den.coeffs[-1]
    if len(rem) - 1 < dd:
        return IntPolynomial(), num
    quot = [0] * (len(rem) - dd)
    for shift in range(len(rem) - 1 - dd, -1, -1):
        top = rem[shift + dd]
        if top == 0:
            continue
        q, r = divmod(top, lead)
        if r:
            return None
        quot[shift] = q
        for i, c in enumerate(den.coeffs):
            rem[shift + i] -= q * c
    return IntPolynomial(tuple(quot)), IntPolynomial(tuple(rem))


def poly_divexact(num: IntPolynomial, den: IntPolynomial) -> tuple[IntPolynomial, bool]:
    """Divide ``num`` by ``den``.

    The flag is True iff ``den`` divides ``num`` in Z[z]; the quotient is only
    meaningful in that case.
    """
    res = poly_divmod(num, den)
    if res is None:
        return IntPolynomial(), False
    quot, rem = res
    return quot, rem.is_zero()


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series known exactly through ``z**order``.

    Coefficients may be any integers; :attr:`is_nonnegative` reports whether the
    series could be a generating function of a set or of its powers.
    """

    coeffs: tuple[int, ...]
    order: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if self.order < 0:
            raise ValueError("truncation order must be nonnegative")
        if len(self.coeffs) != self.order + 1:
            raise ValueError(
                f"series of order {self.order} needs {self.order + 1} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def from_poly(cls, p: IntPolynomial, order: int) -> TruncatedSeries:
        return cls(tuple(p[i] for i in range(order + 1)), order)

    @classmethod
    def indicator(cls, members: Iterable[int], order: int) -> TruncatedSeries:
        """Generating series with coefficient 1 at each member ``<= order``."""
        out = [0] * (order + 1)
        for a in members:
            if 0 <= a <= order:
                out[a] = 1
        return cls(tuple(out), order)

    def coeff(self, e: int) -> int:
        if e < 0:
            return 0
        if e > self.order:
            raise TruncationError(f"coefficient z^{e} requested from a series truncated at z^{self.order}")
        return self.coeffs[e]

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise TruncationError(f"cannot extend a series of order {self.order} to order {order}")
        return TruncatedSeries(self.coeffs[: order + 1], order)

    @property
    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def coefficient_sum(self, upto: int | None = None) -> int:
        upto = self.order if upto is None else upto
        return sum(self.coeff(e) for e in range(upto + 1))

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_mul(self, other)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    order = min(a.order, b.order)
    out = [0] * (order + 1)
    nz_b = [(j, y) for j, y in enumerate(b.coeffs[: order + 1]) if y]
    for i, x in enumerate(a.coeffs[: order + 1]):
        if x == 0:
            continue
        room = order - i
        for j, y in nz_b:
            if j > room:
                break
            out[i + j] += x * y
    return TruncatedSeries(tuple(out), order)


def series_substitute_power(a: TruncatedSeries, k: int) -> TruncatedSeries:
    """``a(z**k)``, keeping the truncation order of ``a``."""
    if k < 1:
        raise ValueError("k must be positive")
    out = [0] * (a.order + 1)
    for e in range(a.order // k + 1):
        out[e * k] = a.coeffs[e]
    return TruncatedSeries(tuple(out), a.order)


def series_product(factors: Sequence[TruncatedSeries]) -> TruncatedSeries:
    if not factors:
        raise ValueError("empty product")
    out = factors[0]
    for f in factors[1:]:
        out = series_mul(out, f)
    return out
