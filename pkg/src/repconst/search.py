"""Exhaustive depth-first search for prefixes with constant representation.

Membership of 0, 1, 2, ..., N is decided in order.  After deciding x the
prefix is settled on [0, x], which fixes r_A(n) for every n < (x+1) * k_min;
any such n >= n0 must already have r_A(n) = c, and no n >= n0 may exceed c
since counts only grow as members are added.

The pending stack of decision prefixes doubles as the checkpoint format, so a
run stopped by its node budget can be resumed exactly where it left off.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal, Sequence

from .repfn import CoefficientTuple, SetPrefix

Status = Literal["exhausted-no-survivor", "survivors-found", "budget-exceeded"]


@dataclass(frozen=True)
class SearchConfig:
    K: CoefficientTuple
    c: int
    n0: int
    N: int
    node_budget: int = 10**7
    report_all: bool = False

    def __post_init__(self) -> None:
        if self.c < 1:
            raise ValueError("the constant must be positive")
        if self.N < self.n0:
            raise ValueError("N must be at least n0")
        if self.node_budget < 1:
            raise ValueError("node budget must be positive")

    @property
    def limit(self) -> int:
        """Largest n whose count can be determined by a prefix on [0, N]."""
        return (self.N + 1) * self.K.k_min - 1

    def to_dict(self) -> dict:
        return {
            "ks": list(self.K.ks),
            "c": self.c,
            "n0": self.n0,
            "N": self.N,
            "node_budget": self.node_budget,
            "report_all": self.report_all,
        }

    @classmethod
    def from_dict(cls, data: dict) -> SearchConfig:
        return cls(
            CoefficientTuple(tuple(data["ks"])),
            int(data["c"]),
            int(data["n0"]),
            int(data["N"]),
            int(data["node_budget"]),
            bool(data["report_all"]),
        )


@dataclass
class SearchOutcome:
    status: Status
    survivors: list[SetPrefix]
    nodes_explored: int
    deepest_bound_reached: int
    config: SearchConfig
    frontier: list[tuple[int, ...]] = field(default_factory=list)
    nodes_per_depth: list[int] = field(default_factory=list)
    prunes: dict[str, int] = field(default_factory=lambda: {"exceeds": 0, "mismatch": 0})

    def survivor_sets(self) -> set[tuple[int, ...]]:
        return {s.members for s in self.survivors}

    def to_dict(self) -> dict:
        depths: dict[int, int] = {}
        for p in self.frontier:
            depths[len(p)] = depths.get(len(p), 0) + 1
        return {
            "status": self.status,
            "config": self.config.to_dict(),
            "nodes_explored": self.nodes_explored,
            "deepest_bound_reached": self.deepest_bound_reached,
            "survivors": [{"members": list(s.members), "decided_bound": s.decided_bound} for s in self.survivors],
            "statistics": {
                "nodes_per_depth": self.nodes_per_depth,
                "prunes": self.prunes,
                "frontier_size": len(self.frontier),
                "frontier_depths": {str(k): v for k, v in sorted(depths.items())},
            },
        }

    def checkpoint(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "pending": [list(p) for p in self.frontier],
            "survivors": [list(s.members) for s in self.survivors],
            "nodes_explored": self.nodes_explored,
            "deepest_bound_reached": self.deepest_bound_reached,
            "nodes_per_depth": self.nodes_per_depth,
            "prunes": self.prunes,
        }


class _State:
    """Members decided so far plus the live counts r(0..limit)."""

    def __init__(self, cfg: SearchConfig) -> None:
        self.cfg = cfg
        self.ks = cfg.K.ks
        self.limit = cfg.limit
        self.r = [0] * (self.limit + 1)
        self.members: list[int] = []
        self.decisions: list[int] = []
        self.undo: list[list[int]] = []
        d = len(self.ks)
        self.subsets = [
            (sum(self.ks[i] for i in S), [i for i in range(d) if i not in S])
            for size in range(1, d + 1)
            for S in combinations(range(d), size)
        ]

    def _tuples(self, positions: list[int], budget: int, acc: int, out: list[int]) -> None:
        if not positions:
            out.append(acc)
            return
        k = self.ks[positions[0]]
        rest = positions[1:]
        for a in self.members:
            w = k * a
            if w > budget:
                break
            self._tuples(rest, budget - w, acc + w, out)

    def push(self, include: int) -> bool:
        """Decide the next integer; False if the prefix can no longer succeed."""
        x = len(self.decisions)
        touched: list[int] = []
        if include:
            for ksum, others in self.subsets:
                base = x * ksum
                if base > self.limit:
                    continue
                self._tuples(others, self.limit - base, base, touched)
            for n in touched:
                self.r[n] += 1
        self.decisions.append(include)
        self.undo.append(touched)
        if include:
            self.members.append(x)
        cfg = self.cfg
        ok = True
        for n in touched:
            if n >= cfg.n0 and self.r[n] > cfg.c:
                self.reason = "exceeds"
                ok = False
                break
        if ok:
            kmin = cfg.K.k_min
            for n in range(max(x * kmin, cfg.n0), min((x + 1) * kmin, self.limit + 1)):
                if self.r[n] != cfg.c:
                    self.reason = "mismatch"
                    ok = False
                    break
        return ok

    def pop(self) -> None:
        include = self.decisions.pop()
        for n in self.undo.pop():
            self.r[n] -= 1
        if include:
            self.members.pop()

    def sync(self, prefix: Sequence[int]) -> None:
        """Move to ``prefix`` (whose proper prefixes are known to be viable)."""
        common = 0
        for a, b in zip(self.decisions, prefix):
            if a != b:
                break
            common += 1
        while len(self.decisions) > common:
            self.pop()
        for bit in prefix[common:]:
            self.push(bit)


def _explore(
    cfg: SearchConfig,
    pending: list[tuple[int, ...]],
    budget: int,
    survivors: list[tuple[int, ...]] | None = None,
    stats: dict | None = None,
) -> dict:
    state = _State(cfg)
    survivors = list(survivors or [])
    stats = stats or {}
    nodes = stats.get("nodes_explored", 0)
    deepest = stats.get("deepest_bound_reached", -1)
    per_depth = list(stats.get("nodes_per_depth", [0] * (cfg.N + 1)))
    prunes = dict(stats.get("prunes", {"exceeds": 0, "mismatch": 0}))
    spent = 0
    stopped = False
    while pending:
        if spent >= budget or (survivors and not cfg.report_all):
            stopped = True
            break
        prefix = pending.pop()
        state.sync(prefix[:-1])
        ok = state.push(prefix[-1])
        spent += 1
        nodes += 1
        x = len(prefix) - 1
        per_depth[x] += 1
        if not ok:
            prunes[state.reason] += 1
            continue
        deepest = max(deepest, x)
        if x == cfg.N:
            survivors.append(tuple(state.members))
            continue
        # include is explored first
        pending.append(prefix + (0,))
        pending.append(prefix + (1,))
    return {
        "pending": pending,
        "survivors": survivors,
        "nodes_explored": nodes,
        "deepest_bound_reached": deepest,
        "nodes_per_depth": per_depth,
        "prunes": prunes,
        "stopped": stopped,
    }


def _outcome(cfg: SearchConfig, res: dict) -> SearchOutcome:
    survivors = sorted(set(map(tuple, res["survivors"])))
    if res["pending"]:
        status: Status = "survivors-found" if survivors and not cfg.report_all else "budget-exceeded"
    else:
        status = "survivors-found" if survivors else "exhausted-no-survivor"
    return SearchOutcome(
        status,
        [SetPrefix(s, cfg.N) for s in survivors],
        res["nodes_explored"],
        res["deepest_bound_reached"],
        cfg,
        [tuple(p) for p in res["pending"]],
        res["nodes_per_depth"],
        res["prunes"],
    )


def _worker(args: tuple[dict, list[list[int]], int]) -> dict:
    cfg_dict, pending, budget = args
    cfg = SearchConfig.from_dict(cfg_dict)
    return _explore(cfg, [tuple(p) for p in pending], budget)


def search_constant_rep(cfg: SearchConfig, threads: int = 1) -> SearchOutcome:
    """Run the search from scratch; ``threads > 1`` farms disjoint subtrees out to processes."""
    if threads <= 1:
        return _outcome(cfg, _explore(cfg, [(0,), (1,)], cfg.node_budget))
    # split breadth-first until there is enough work to share
    pending = [(0,), (1,)]
    state = _State(cfg)
    survivors: list[tuple[int, ...]] = []
    nodes = 0
    prunes = {"exceeds": 0, "mismatch": 0}
    per_depth = [0] * (cfg.N + 1)
    deepest = -1
    while pending and len(pending) < 4 * threads and nodes < cfg.node_budget:
        nxt = []
        for prefix in pending:
            state.sync(prefix[:-1])
            ok = state.push(prefix[-1])
            nodes += 1
            per_depth[len(prefix) - 1] += 1
            if not ok:
                prunes[state.reason] += 1
                continue
            deepest = max(deepest, len(prefix) - 1)
            if len(prefix) - 1 == cfg.N:
                survivors.append(tuple(state.members))
            else:
                nxt += [prefix + (0,), prefix + (1,)]
        pending = nxt
    share = max(1, (cfg.node_budget - nodes) // max(1, len(pending)))
    jobs = [(cfg.to_dict(), [list(p)], share) for p in pending]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(_worker, jobs))
    merged = {
        "pending": [p for r in results for p in r["pending"]],
        "survivors": survivors + [s for r in results for s in r["survivors"]],
        "nodes_explored": nodes + sum(r["nodes_explored"] for r in results),
        "deepest_bound_reached": max([deepest] + [r["deepest_bound_reached"] for r in results]),
        "nodes_per_depth": [a + sum(r["nodes_per_depth"][i] for r in results) for i, a in enumerate(per_depth)],
        "prunes": {k: v + sum(r["prunes"][k] for r in results) for k, v in prunes.items()},
    }
    return _outcome(cfg, merged)


def resume_search(checkpoint: dict, extra_budget: int | None = None) -> SearchOutcome:
    """Continue a run from :meth:`SearchOutcome.checkpoint` output."""
    cfg = SearchConfig.from_dict(checkpoint["config"])
    budget = extra_budget if extra_budget is not None else cfg.node_budget
    res = _explore(
        cfg,
        [tuple(p) for p in checkpoint["pending"]],
        budget,
        [tuple(s) for s in checkpoint["survivors"]],
        checkpoint,
    )
    return _outcome(cfg, res)


def load_checkpoint(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def save_checkpoint(outcome: SearchOutcome, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(outcome.checkpoint(), fh)
