"""Multiplicity recurrences over exponent vectors, m-structures and certificates.

Exponent vectors are plain tuples of nonnegative ints.  For a tuple K in
theorem form with exponent rows b_1..b_d, the multiplicities r_j of the
cyclotomic factors satisfy

    r_0 = -1,    sum_i r_{j (-) b_i} = d * s_j   (j != 0),

where (-) is componentwise truncated subtraction and s_j is the multiplicity
of Phi_j in P.  This module solves that system, manipulates the abstract
m-structures behind the non-constancy argument, and produces replayable
certificates that no finitely supported s is compatible with r_j = -1 mod d.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .repfn import CoefficientTuple, TheoremForm

ExpVector = tuple[int, ...]

BOX_CAP = 64


class OrderingInvariantError(RuntimeError):
    """A relation had two unknowns when processed in precedence order."""


class CertificateSearchError(RuntimeError):
    pass


def ominus(a: Sequence[int], b: Sequence[int]) -> ExpVector:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return tuple(x - y if x > y else 0 for x, y in zip(a, b))


def precede_key(a: Sequence[int]) -> tuple[ExpVector, ExpVector]:
    """Sort key for the precedence order: sorted entries first, raw entries as tie-break."""
    return tuple(sorted(a)), tuple(a)


def precede(a: Sequence[int], b: Sequence[int]) -> bool:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return precede_key(a) < precede_key(b)


def box_points(upper: Sequence[int]) -> Iterator[ExpVector]:
    return itertools.product(*(range(u + 1) for u in upper))


def in_box(j: Sequence[int], upper: Sequence[int]) -> bool:
    return all(x <= u for x, u in zip(j, upper))


def relation_terms(j: Sequence[int], rows: Sequence[Sequence[int]]) -> dict[ExpVector, int]:
    """The left side of relation j as {index: multiplicity}."""
    out: dict[ExpVector, int] = {}
    for row in rows:
        i = ominus(j, row)
        out[i] = out.get(i, 0) + 1
    return out


def relations_containing(i: ExpVector, rows: Sequence[Sequence[int]]) -> set[ExpVector]:
    """Every nonzero j whose relation involves index i."""
    out = set()
    for row in rows:
        options = []
        for ik, bk in zip(i, row):
            if bk == 0:
                options.append((ik,))
            elif ik > 0:
                options.append((ik + bk,))
            else:
                options.append(tuple(range(bk + 1)))
        out.update(j for j in itertools.product(*options) if any(j))
    return out


# --------------------------------------------------------------------------
# multiplicity solver
# --------------------------------------------------------------------------


@dataclass
class MultiplicityTable:
    d: int
    values: dict[ExpVector, int]
    provenance: dict[ExpVector, ExpVector]
    box: ExpVector

    def __getitem__(self, i: ExpVector) -> int:
        return self.values[i]

    def in_box(self) -> dict[ExpVector, int]:
        return {i: r for i, r in self.values.items() if in_box(i, self.box)}


@dataclass
class Conflict:
    """Relation ``at`` cannot hold: either sides differ or the solved value is impossible."""

    at: ExpVector
    kind: str  # "mismatch", "non-integral" or "congruence"
    reason: str
    table: MultiplicityTable
    coefficient: int = 1

    def __bool__(self) -> bool:
        return False


def _form_for(K: CoefficientTuple, form: TheoremForm | None) -> TheoremForm:
    if form is None:
        return K.theorem_form()
    if form.ks() != K.ks:
        raise ValueError(f"decomposition {form} does not produce {K.ks}")
    return form


def _first_relation(i: ExpVector, rows) -> ExpVector:
    if not any(i):
        return i
    return min(relations_containing(i, rows), key=precede_key)


def solve_multiplicities(
    K: CoefficientTuple,
    s: Mapping[ExpVector, int],
    box: Sequence[int],
    form: TheoremForm | None = None,
) -> MultiplicityTable | Conflict:
    """Determine r_i for every i in [0, box] and check every relation j in [0, box].

    Each index is solved from the earliest relation (in precedence order) that
    mentions it; indices outside the box are pulled in when such a relation
    needs them.  A solved value that is not an integer, or not -1 mod d, is a
    conflict because genuine multiplicities have both properties.
    """
    form = _form_for(K, form)
    rows = form.b
    d = K.d
    box = tuple(box)
    if len(box) != form.m:
        raise ValueError(f"box has length {len(box)}, expected {form.m}")
    for key, val in s.items():
        if len(key) != form.m or val < 0:
            raise ValueError(f"bad s entry {key}: {val}")

    first: dict[ExpVector, ExpVector] = {}
    pending = list(box_points(box))
    while pending:
        i = pending.pop()
        if i in first:
            continue
        j = first[i] = _first_relation(i, rows)
        for other in relation_terms(j, rows):
            if other != i and other not in first:
                pending.append(other)

    table = MultiplicityTable(d, {}, {}, box)
    for i in sorted(first, key=lambda x: precede_key(first[x])):
        j = first[i]
        table.provenance[i] = j
        if not any(j):
            table.values[i] = -1
            continue
        terms = relation_terms(j, rows)
        known = 0
        for other, mult in terms.items():
            if other == i:
                continue
            if other not in table.values:
                raise OrderingInvariantError(f"relation {j} has unknowns {i} and {other}")
            known += mult * table.values[other]
        num = d * s.get(j, 0) - known
        coef = terms[i]
        if num % coef:
            return Conflict(j, "non-integral", f"r_{i} = {Fraction(num, coef)} is not an integer", table, coef)
        r = num // coef
        table.values[i] = r
        if (r + 1) % d:
            return Conflict(j, "congruence", f"r_{i} = {r} is not -1 mod {d}", table, coef)

    for j in sorted(box_points(box), key=precede_key):
        if not any(j):
            continue
        lhs = sum(mult * table.values[i] for i, mult in relation_terms(j, rows).items())
        rhs = d * s.get(j, 0)
        if lhs != rhs:
            return Conflict(j, "mismatch", f"relation {j} reads {lhs} = {rhs}", table)
    return table


# --------------------------------------------------------------------------
# m-structures
# --------------------------------------------------------------------------


@dataclass
class MStructure:
    """Values v_j with sum_i v_{j (-) c_i} = u_j for nonzero j.

    ``u`` has finite support (missing keys are 0); ``v`` may be partial.
    """

    cvecs: tuple[ExpVector, ...]
    u: dict[ExpVector, int] = field(default_factory=dict)
    v: dict[ExpVector, Fraction] = field(default_factory=dict)
    t: ExpVector | None = None

    def __post_init__(self) -> None:
        self.cvecs = tuple(tuple(c) for c in self.cvecs)
        if not self.cvecs:
            raise ValueError("need at least one coefficient vector")
        if len({len(c) for c in self.cvecs}) != 1:
            raise ValueError("coefficient vectors differ in length")
        if self.t is not None:
            self.t = tuple(self.t)

    @property
    def m(self) -> int:
        return len(self.cvecs[0])

    @property
    def d(self) -> int:
        return len(self.cvecs)

    def S(self, axis: int) -> list[int]:
        """Rows whose coefficient vector vanishes on ``axis`` (0-based)."""
        return [i for i, c in enumerate(self.cvecs) if c[axis] == 0]

    def is_regular(self) -> bool:
        # With m = 1 every 0/1 vector is (1,), so no row can miss the only axis;
        # the one-dimensional case only asks for nonzero 0/1 vectors.
        if any(x not in (0, 1) for c in self.cvecs for x in c) or any(not any(c) for c in self.cvecs):
            return False
        return self.m == 1 or all(self.S(a) for a in range(self.m))

    def support_box(self) -> ExpVector:
        box = [0] * self.m
        for j, val in self.u.items():
            if val:
                box = [max(x, y) for x, y in zip(box, j)]
        return tuple(box)

    def homogeneous_outside(self, t: Sequence[int]) -> bool:
        return all(val == 0 or in_box(j, t) for j, val in self.u.items())

    def residual(self, j: ExpVector) -> Fraction:
        """lhs - rhs of relation j; requires the v values it touches."""
        if not any(j):
            raise ValueError("there is no relation at the zero vector")
        return sum((Fraction(self.v[ominus(j, c)]) for c in self.cvecs), Fraction(0)) - self.u.get(j, 0)

    def relations_hold(self, upper: Sequence[int]) -> bool:
        return all(self.residual(j) == 0 for j in box_points(upper) if any(j))


def _drop(v: Sequence[int], axis: int) -> ExpVector:
    return tuple(v[:axis]) + tuple(v[axis + 1 :])


def _insert(v: Sequence[int], axis: int, value: int) -> ExpVector:
    return tuple(v[:axis]) + (value,) + tuple(v[axis:])


def reduce_delta(S: MStructure, axis: int) -> MStructure:
    """Differences along ``axis`` (0-based) form a structure one dimension smaller.

    Delta_i = v_{i with 1 inserted at axis} - v_{i with 0 inserted at axis}; it is
    governed by the rows missing ``axis`` and by u'_j = u_{(j,1)} - u_{(j,0)}.
    """
    if S.m < 2:
        raise ValueError("cannot reduce a one-dimensional structure")
    keep = S.S(axis)
    if not keep:
        raise ValueError(f"every coefficient vector is nonzero on axis {axis}")
    cvecs = tuple(_drop(S.cvecs[i], axis) for i in keep)
    u: dict[ExpVector, int] = {}
    for j, val in S.u.items():
        if j[axis] in (0, 1) and val:
            jp = _drop(j, axis)
            if any(jp):
                u[jp] = u.get(jp, 0) + (val if j[axis] == 1 else -val)
    u = {j: val for j, val in u.items() if val}
    v: dict[ExpVector, Fraction] = {}
    for i, val in S.v.items():
        if i[axis] == 0:
            up = _insert(_drop(i, axis), axis, 1)
            if up in S.v:
                v[_drop(i, axis)] = Fraction(S.v[up]) - Fraction(val)
    t = _drop(S.t, axis) if S.t is not None else None
    return MStructure(cvecs, u, v, t)


@dataclass
class ProofStep:
    kind: str  # "reduce", "base", "shift", "anchor", "path", "conclude"
    depth: int
    text: str
    data: dict = field(default_factory=dict)


@dataclass
class ProofLog:
    ok: bool
    target: ExpVector
    steps: list[ProofStep]
    reason: str = ""

    def render(self) -> str:
        lines = [f"{'  ' * s.depth}[{s.kind}] {s.text}" for s in self.steps]
        if not self.ok:
            lines.append(f"FAILED: {self.reason}")
        return "\n".join(lines)


class _Irregular(Exception):
    pass


def _fmt(v: Sequence[int]) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def _vanishing_trace(cvecs: tuple[ExpVector, ...], t: ExpVector, depth: int, steps: list[ProofStep]) -> None:
    """Log the argument that v vanishes outside [0, t] for a regular structure."""
    m, d = len(t), len(cvecs)
    probe = MStructure(cvecs)
    if not probe.is_regular():
        raise _Irregular(f"structure with vectors {list(cvecs)} is not regular")
    if m == 1:
        steps.append(
            ProofStep(
                "base",
                depth,
                f"m=1: relation j reads {d}*v_(j-1) = u_j and u_j = 0 for j > {t[0]}, so v_i = 0 for i > {t[0]}",
                {"t": t, "d": d},
            )
        )
        return
    for axis in range(m):
        keep = probe.S(axis)
        sub = tuple(_drop(cvecs[i], axis) for i in keep)
        sub_t = _drop(t, axis)
        steps.append(
            ProofStep(
                "reduce",
                depth,
                f"axis {axis}: differences v_(..1..) - v_(..0..) form a {m - 1}-structure with vectors "
                f"{[_fmt(c) for c in sub]}, homogeneous outside {_fmt(sub_t)}",
                {"axis": axis, "rows": keep, "cvecs": sub, "t": sub_t},
            )
        )
        _vanishing_trace(sub, sub_t, depth + 1, steps)
        steps.append(
            ProofStep(
                "shift",
                depth,
                f"axis {axis}: shifting the structure {t[axis]} times along the axis gives v_i = v_(i+e_{axis}) "
                f"for i outside {_fmt(t)}",
                {"axis": axis},
            )
        )
    anchor = tuple(2 * x + 2 for x in t)
    terms = [ominus(anchor, c) for c in cvecs]
    steps.append(
        ProofStep(
            "anchor",
            depth,
            f"relation {_fmt(anchor)}: " + " + ".join(f"v_{_fmt(x)}" for x in terms)
            + f" = u_{_fmt(anchor)} = 0; every term lies outside {_fmt(t)} and shifts to v_{_fmt(anchor)}, "
            f"so {d}*v_{_fmt(anchor)} = 0",
            {"j": anchor, "terms": terms},
        )
    )


def zero_propagation(S: MStructure, target: Sequence[int], t: Sequence[int] | None = None) -> ProofLog:
    """Trace why v_target = 0 for a regular structure homogeneous outside t.

    ``t`` defaults to ``S.t`` and then to the smallest box holding the support of u.
    Returns a failed log when the target lies in the box or when a reduced
    structure met along the way is not regular.
    """
    target = tuple(target)
    if t is None:
        t = S.t if S.t is not None else S.support_box()
    t = tuple(t)
    if len(target) != S.m or len(t) != S.m:
        raise ValueError("target and box must have the structure's dimension")
    if not S.is_regular():
        raise ValueError("zero propagation needs a regular structure")
    if not S.homogeneous_outside(t):
        raise ValueError(f"structure is not homogeneous outside {_fmt(t)}")
    steps: list[ProofStep] = []
    if in_box(target, t):
        return ProofLog(False, target, steps, f"target {_fmt(target)} lies inside {_fmt(t)}")
    if S.m == 1:
        j = (target[0] + 1,)
        steps.append(
            ProofStep(
                "anchor",
                0,
                f"relation {_fmt(j)} reads {S.d}*v_{_fmt(target)} = u_{_fmt(j)} = 0",
                {"j": j, "terms": [target] * S.d},
            )
        )
    else:
        try:
            _vanishing_trace(S.cvecs, t, 0, steps)
        except _Irregular as exc:
            return ProofLog(False, target, steps, str(exc))
        anchor = tuple(2 * x + 2 for x in t)
        path = [target]
        cur = list(target)
        for axis in range(S.m):
            while cur[axis] != anchor[axis]:
                cur[axis] += 1 if cur[axis] < anchor[axis] else -1
                path.append(tuple(cur))
        path = [p for p in path if not in_box(p, t)]
        steps.append(
            ProofStep(
                "path",
                0,
                "shift chain " + " = ".join(f"v_{_fmt(p)}" for p in path),
                {"path": path},
            )
        )
    steps.append(ProofStep("conclude", 0, f"v_{_fmt(target)} = 0", {"target": target}))
    return ProofLog(True, target, steps)


# --------------------------------------------------------------------------
# certificates
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """Rational combination of out-of-box relations that collapses to v_target = 0."""

    ks: tuple[int, ...]
    qs: tuple[int, ...]
    b: tuple[ExpVector, ...]
    t: ExpVector
    working_box: ExpVector
    steps: tuple[tuple[ExpVector, Fraction], ...]
    target: ExpVector

    @property
    def d(self) -> int:
        return len(self.ks)

    def to_dict(self) -> dict:
        return {
            "ks": list(self.ks),
            "q": list(self.qs),
            "b_matrix": [list(r) for r in self.b],
            "t": list(self.t),
            "working_box": list(self.working_box),
            "steps": [
                {"j": list(j), "coeff_num": c.numerator, "coeff_den": c.denominator} for j, c in self.steps
            ],
            "target": list(self.target),
            "d": self.d,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, data: Mapping) -> Certificate:
        ks = tuple(data["ks"])
        if "d" in data and data["d"] != len(ks):
            raise ValueError(f"certificate states d={data['d']} but lists {len(ks)} coefficients")
        return cls(
            ks,
            tuple(data["q"]),
            tuple(tuple(r) for r in data["b_matrix"]),
            tuple(data["t"]),
            tuple(data["working_box"]),
            tuple((tuple(s["j"]), Fraction(s["coeff_num"], s["coeff_den"])) for s in data["steps"]),
            tuple(data["target"]),
        )

    @classmethod
    def from_json(cls, text: str) -> Certificate:
        return cls.from_dict(json.loads(text))


class _Echelon:
    """Incremental sparse row echelon form that remembers how each row was built."""

    def __init__(self) -> None:
        self.pivots: list[tuple[ExpVector, dict[ExpVector, Fraction], dict[ExpVector, Fraction]]] = []
        self.pivot_cols: dict[ExpVector, int] = {}

    def _reduce(self, vec: dict, combo: dict) -> None:
        for col, row, rcombo in self.pivots:
            f = vec.get(col)
            if not f:
                continue
            f = f / row[col]
            for k, x in row.items():
                y = vec.get(k, 0) - f * x
                if y:
                    vec[k] = y
                else:
                    vec.pop(k, None)
            for k, x in rcombo.items():
                y = combo.get(k, 0) - f * x
                if y:
                    combo[k] = y
                else:
                    combo.pop(k, None)

    def add(self, label: ExpVector, vec: Mapping[ExpVector, int]) -> None:
        row = {k: Fraction(x) for k, x in vec.items() if x}
        combo = {label: Fraction(1)}
        self._reduce(row, combo)
        if row:
            col = max(row, key=precede_key)
            self.pivot_cols[col] = len(self.pivots)
            self.pivots.append((col, row, combo))

    def express_unit(self, target: ExpVector) -> dict[ExpVector, Fraction] | None:
        """Coefficients lam with sum lam_j * row_j = e_target, or None."""
        vec = {target: Fraction(1)}
        combo: dict[ExpVector, Fraction] = {}
        self._reduce(vec, combo)
        if vec:
            return None
        return {k: -x for k, x in combo.items()}


def _target_order(box: Sequence[int]) -> list[ExpVector]:
    # smallest total degree first; ties favour weight on earlier coordinates
    return sorted(box_points(box), key=lambda i: (sum(i), tuple(-x for x in i)))


def derive_zero(
    rows: Sequence[ExpVector],
    t: Sequence[int],
    working_box: Sequence[int],
    target: Sequence[int] | None = None,
) -> tuple[ExpVector, dict[ExpVector, Fraction]] | None:
    """Combine relations j in the working box but outside [0, t] into e_target.

    Without an explicit target the first derivable index in ``_target_order`` wins.
    """
    ech = _Echelon()
    for j in sorted(box_points(working_box), key=precede_key):
        if in_box(j, t):
            continue
        ech.add(j, relation_terms(j, rows))
    candidates = [tuple(target)] if target is not None else _target_order(working_box)
    for cand in candidates:
        lam = ech.express_unit(cand)
        if lam is not None:
            return cand, lam
    return None


def certify_nonconstant(
    K: CoefficientTuple,
    t: Sequence[int],
    target: Sequence[int] | None = None,
    form: TheoremForm | None = None,
) -> Certificate:
    """Find an out-of-box linear combination forcing some multiplicity to vanish.

    The working box starts at 2t + 2 and doubles until elimination succeeds.
    """
    form = _form_for(K, form)
    t = tuple(t)
    if len(t) != form.m or any(x < 0 for x in t):
        raise ValueError(f"t must be a nonnegative vector of length {form.m}")
    box = tuple(2 * x + 2 for x in t)
    if target is not None:
        box = tuple(max(x, y + 1) for x, y in zip(box, target))
    while max(box) <= BOX_CAP:
        found = derive_zero(form.b, t, box, target)
        if found is not None:
            tgt, lam = found
            steps = tuple((j, lam[j]) for j in sorted(lam, key=precede_key))
            return Certificate(K.ks, form.qs, form.b, t, box, steps, tgt)
        box = tuple(2 * x for x in box)
    raise CertificateSearchError(f"no certificate for {K.ks} with t={t} within box entries {BOX_CAP}")

