"""Stand-alone replay of non-constancy certificates.

Deliberately shares no code with the generator: it re-derives the relation
terms from the recorded exponent rows and sums the cited relations itself.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd
from typing import Any


def _vec(x: Any, m: int) -> tuple[int, ...]:
    v = tuple(int(e) for e in x)
    if len(v) != m or any(e < 0 for e in v):
        raise ValueError(f"bad vector {x!r}")
    return v


def check_certificate(data: dict) -> list[str]:
    """Return the list of problems found; empty means the certificate is valid."""
    problems: list[str] = []
    try:
        ks = [int(k) for k in data["ks"]]
        qs = [int(q) for q in data["q"]]
        rows = data["b_matrix"]
        m = len(qs)
        d = len(ks)
        if int(data.get("d", d)) != d:
            problems.append("d does not match the number of coefficients")
        if d < 2:
            problems.append("need at least two coefficients")
        if any(q < 2 for q in qs):
            problems.append("bases must be at least 2")
        for a in range(m):
            for b in range(a + 1, m):
                if gcd(qs[a], qs[b]) != 1:
                    problems.append(f"bases {qs[a]} and {qs[b]} share a factor")
        if len(rows) != d:
            problems.append("b_matrix needs one row per coefficient")
        brows = [_vec(r, m) for r in rows]
        for k, row in zip(ks, brows):
            if any(e not in (0, 1) for e in row) or not any(row):
                problems.append(f"row {row} is not a nonzero 0/1 vector")
            value = 1
            for q, e in zip(qs, row):
                value *= q**e
            if value != k:
                problems.append(f"row {row} gives {value}, not {k}")
        t = _vec(data["t"], m)
        box = _vec(data["working_box"], m)
        target = _vec(data["target"], m)
        total: dict[tuple[int, ...], Fraction] = {}
        seen = set()
        for step in data["steps"]:
            j = _vec(step["j"], m)
            if j in seen:
                problems.append(f"relation {j} cited twice")
            seen.add(j)
            if all(x <= y for x, y in zip(j, t)):
                problems.append(f"relation {j} lies inside the box {t}")
            if not all(x <= y for x, y in zip(j, box)):
                problems.append(f"relation {j} lies outside the working box {box}")
            den = int(step["coeff_den"])
            if den == 0:
                problems.append(f"zero denominator at {j}")
                continue
            coeff = Fraction(int(step["coeff_num"]), den)
            for row in brows:
                idx = tuple(max(x - y, 0) for x, y in zip(j, row))
                total[idx] = total.get(idx, Fraction(0)) + coeff
        total = {i: c for i, c in total.items() if c}
        if total != {target: Fraction(1)}:
            problems.append(f"cited relations sum to {sorted(total.items())}, not v_{target}")
        # the derived value 0 must be incompatible with r = -1 mod d
        if (0 + 1) % d == 0:
            problems.append(f"0 is congruent to -1 mod {d}")
    except (KeyError, TypeError, ValueError) as exc:
        problems.append(f"malformed certificate: {exc}")
    return problems


def verify_certificate(cert: Any) -> bool:
    """Accepts a Certificate, its dict form, or its JSON text."""
    if isinstance(cert, str):
        try:
            cert = json.loads(cert)
        except json.JSONDecodeError:
            return False
    elif hasattr(cert, "to_dict"):
        cert = cert.to_dict()
    return not check_certificate(cert)
