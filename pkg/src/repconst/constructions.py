"""Moser's set and its geometric-progression generalization.

For K = (1, k, ..., k**(d-1)) the set of integers whose base-k**d digits all
lie in {0, ..., k-1} represents every n exactly once: write n in base k and
deal its digits out round-robin to the d coordinates.
"""

from __future__ import annotations

from .repfn import CoefficientTuple, SetPrefix


def _check(k: int, d: int) -> None:
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")


def in_moser_set(a: int, k: int, d: int) -> bool:
    base = k**d
    while a:
        a, digit = divmod(a, base)
        if digit >= k:
            return False
    return True


def moser_set(k: int, d: int, N: int) -> SetPrefix:
    _check(k, d)
    return SetPrefix(tuple(a for a in range(N + 1) if in_moser_set(a, k, d)), N)


def moser_tuple(k: int, d: int) -> CoefficientTuple:
    return CoefficientTuple(tuple(k**i for i in range(d)))


def decompose_moser(n: int, k: int, d: int) -> tuple[int, ...]:
    """The unique (a_1..a_d) in the Moser set with sum k**(i-1) * a_i == n."""
    _check(k, d)
    if n < 0:
        raise ValueError("n must be nonnegative")
    parts = [0] * d
    scale = [1] * d
    pos = 0
    while n:
        n, digit = divmod(n, k)
        i = pos % d
        parts[i] += digit * scale[i]
        scale[i] *= k**d
        pos += 1
    return tuple(parts)
