"""Representation functions r_A(n; k_1, ..., k_d) over decided set prefixes."""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd, prod
from typing import Iterable, Literal

from .polyseries import IntPolynomial, TruncatedSeries, series_mul, series_substitute_power


class NotTheoremForm(ValueError):
    """The coefficient tuple cannot be written as products of distinct co-prime bases."""


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class TheoremForm:
    """k_i = prod_l q_l ** b[i][l] with pairwise co-prime q_l >= 2 and b in {0,1}."""

    qs: tuple[int, ...]
    b: tuple[tuple[int, ...], ...]

    @property
    def m(self) -> int:
        return len(self.qs)

    def ks(self) -> tuple[int, ...]:
        return tuple(prod(q**e for q, e in zip(self.qs, row)) for row in self.b)


@dataclass(frozen=True)
class CoefficientTuple:
    ks: tuple[int, ...]

    def __post_init__(self) -> None:
        ks = tuple(int(k) for k in self.ks)
        object.__setattr__(self, "ks", ks)
        if len(ks) < 2:
            raise ValueError("need at least two coefficients")
        if any(k < 1 for k in ks):
            raise ValueError("coefficients must be positive integers")

    @classmethod
    def parse(cls, text: str) -> CoefficientTuple:
        return cls(tuple(int(x) for x in text.split(",") if x.strip()))

    @property
    def d(self) -> int:
        return len(self.ks)

    @property
    def g(self) -> int:
        return gcd(*self.ks)

    @property
    def k_min(self) -> int:
        return min(self.ks)

    def theorem_form(self) -> TheoremForm:
        """Decompose into co-prime bases with 0/1 exponents.

        Primes that divide exactly the same coefficients are merged into one base,
        so the number of bases is as small as possible.  Tuples with a common
        factor are rejected: their representation function is trivially not
        eventually constant and the reduction machinery needs every base to miss
        some coefficient.
        """
        if 1 in self.ks:
            raise NotTheoremForm(f"{self.ks} is not of theorem form: a coefficient equals 1")
        facs = [factorize(k) for k in self.ks]
        primes = sorted({p for f in facs for p in f})
        groups: dict[tuple[int, ...], int] = {}
        for p in primes:
            exps = {f[p] for f in facs if p in f}
            if len(exps) != 1:
                raise NotTheoremForm(
                    f"{self.ks} is not of theorem form: prime {p} occurs with exponents {sorted(exps)}"
                )
            support = tuple(1 if p in f else 0 for f in facs)
            groups[support] = groups.get(support, 1) * p ** exps.pop()
        if self.g > 1:
            raise NotTheoremForm(f"{self.ks} is not of theorem form: gcd {self.g} > 1")
        supports = list(groups)
        qs = tuple(groups[s] for s in supports)
        b = tuple(tuple(s[i] for s in supports) for i in range(self.d))
        return TheoremForm(qs, b)


@dataclass(frozen=True)
class SetPrefix:
    """Members of A inside [0, decided_bound]; membership there is settled."""

    members: tuple[int, ...]
    decided_bound: int

    def __post_init__(self) -> None:
        mem = tuple(int(a) for a in self.members)
        object.__setattr__(self, "members", mem)
        if any(a < 0 for a in mem):
            raise ValueError("members must be nonnegative")
        if any(x >= y for x, y in zip(mem, mem[1:])):
            raise ValueError("members must be strictly increasing")
        if mem and mem[-1] > self.decided_bound:
            raise ValueError(f"member {mem[-1]} exceeds decided bound {self.decided_bound}")

    @classmethod
    def of(cls, members: Iterable[int], decided_bound: int | None = None) -> SetPrefix:
        mem = tuple(sorted(set(members)))
        if decided_bound is None:
            decided_bound = mem[-1] if mem else 0
        return cls(mem, decided_bound)

    def __contains__(self, a: int) -> bool:
        return a in set(self.members)

    def determined(self, K: CoefficientTuple, n: int) -> bool:
        return all(n // k <= self.decided_bound for k in K.ks)

    def indicator(self, order: int) -> TruncatedSeries:
        return TruncatedSeries.indicator(self.members, order)

    def to_json(self) -> str:
        return json.dumps({"members": list(self.members), "decided_bound": self.decided_bound})

    @classmethod
    def from_json(cls, text: str) -> SetPrefix:
        data = json.loads(text)
        return cls(tuple(data["members"]), int(data["decided_bound"]))


def rep_count(A: SetPrefix, K: CoefficientTuple, n: int) -> tuple[int, bool]:
    """Count ordered tuples of members with weighted sum n, by direct enumeration."""
    members = A.members
    ks = K.ks

    def count(pos: int, rest: int) -> int:
        k = ks[pos]
        if pos == len(ks) - 1:
            return 1 if rest % k == 0 and rest // k in memberset else 0
        total = 0
        for a in members:
            if k * a > rest:
                break
            total += count(pos + 1, rest - k * a)
        return total

    memberset = set(members)
    return count(0, n), A.determined(K, n)


def rep_profile(A: SetPrefix, K: CoefficientTuple, N: int) -> list[tuple[int, bool]]:
    """(count, determined) for n = 0..N via the product of f_A(z**k_i)."""
    f = A.indicator(N)
    prod_series = series_substitute_power(f, K.ks[0])
    for k in K.ks[1:]:
        prod_series = series_mul(prod_series, series_substitute_power(f, k))
    return [(prod_series.coeffs[n], A.determined(K, n)) for n in range(N + 1)]


@dataclass(frozen=True)
class ConstancyVerdict:
    status: Literal["holds-on-horizon", "violated", "horizon-empty"]
    horizon: int
    at: int | None = None
    value: int | None = None

    @property
    def holds(self) -> bool:
        return self.status == "holds-on-horizon"


def constancy_check(A: SetPrefix, K: CoefficientTuple, n0: int, c: int) -> ConstancyVerdict:
    """Check r_A(n) == c for every n in [n0, M * k_min]."""
    horizon = A.decided_bound * K.k_min
    if horizon < n0:
        return ConstancyVerdict("horizon-empty", horizon)
    for n, (count, det) in enumerate(rep_profile(A, K, horizon)):
        if n >= n0 and det and count != c:
            return ConstancyVerdict("violated", horizon, n, count)
    return ConstancyVerdict("holds-on-horizon", horizon)


def reconstruct_P(A: SetPrefix, K: CoefficientTuple, N: int) -> TruncatedSeries:
    """Coefficients of (1 - z) * prod_i f_A(z**k_i) through z**N."""
    limit = A.decided_bound * K.k_min
    if N > limit:
        raise ValueError(f"N={N} exceeds the determined horizon {limit} of the prefix")
    f = A.indicator(N)
    gen = series_substitute_power(f, K.ks[0])
    for k in K.ks[1:]:
        gen = series_mul(gen, series_substitute_power(f, k))
    return series_mul(gen, TruncatedSeries.from_poly(IntPolynomial((1, -1)), N))
