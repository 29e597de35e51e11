import json

import pytest

from repconst.constructions import moser_set
from repconst.repfn import CoefficientTuple, constancy_check
from repconst.search import (
    SearchConfig,
    load_checkpoint,
    resume_search,
    save_checkpoint,
    search_constant_rep,
)

K = CoefficientTuple


def _count(n, ks, members, present):
    if len(ks) == 1:
        return 1 if n % ks[0] == 0 and n // ks[0] in present else 0
    total = 0
    for a in members:
        rest = n - ks[0] * a
        if rest < 0:
            break
        total += _count(rest, ks[1:], members, present)
    return total


def brute_survivors(ks, c, n0, N):
    """Every subset of [0, N] whose counts equal c on [n0, (N+1)k_min - 1]."""
    limit = (N + 1) * min(ks) - 1
    out = set()
    for mask in range(1 << (N + 1)):
        members = [a for a in range(N + 1) if mask >> a & 1]
        present = set(members)
        if all(_count(n, ks, members, present) == c for n in range(n0, limit + 1)):
            out.add(tuple(members))
    return out


def run(ks, c, n0, N, **kw):
    return search_constant_rep(SearchConfig(K(ks), c, n0, N, report_all=True, **kw))


def test_moser_prefix_survives():
    out = run((1, 2), 1, 0, 7)
    assert (0, 1, 4, 5) in out.survivor_sets()
    assert out.status == "survivors-found"


def test_parity_obstruction():
    out = run((1, 1), 1, 1, 4)
    assert out.status == "exhausted-no-survivor" and not out.survivors


def test_23_dies_early():
    out = run((2, 3), 1, 0, 10)
    assert out.status == "exhausted-no-survivor"
    assert out.deepest_bound_reached < 10


def test_first_survivor_only():
    out = search_constant_rep(SearchConfig(K((1, 2)), 1, 0, 9))
    assert out.status == "survivors-found" and len(out.survivors) == 1


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(K((1, 2)), 0, 0, 5)
    with pytest.raises(ValueError):
        SearchConfig(K((1, 2)), 1, 6, 5)
    with pytest.raises(ValueError):
        SearchConfig(K((1, 2)), 1, 0, 5, node_budget=0)


@pytest.mark.parametrize(
    "ks, c, n0, N",
    [
        ((1, 2), 1, 0, 12),
        ((1, 2), 1, 3, 10),
        ((1, 2), 1, 6, 9),
        ((1, 1), 2, 2, 10),
        ((1, 3), 1, 0, 11),
        ((2, 3), 1, 0, 10),
        ((2, 3), 2, 4, 10),
        ((1, 2, 4), 1, 0, 10),
        ((1, 2, 3), 2, 5, 10),
    ],
)
def test_pruned_search_matches_brute_force(ks, c, n0, N):
    assert run(ks, c, n0, N).survivor_sets() == brute_survivors(ks, c, n0, N)


def test_survivors_pass_constancy_check():
    for ks, c, n0, N in [((1, 2), 1, 0, 15), ((1, 3), 1, 0, 12), ((1, 2, 4), 1, 0, 12), ((1, 2, 3), 2, 5, 12)]:
        out = run(ks, c, n0, N)
        for A in out.survivors:
            assert constancy_check(A, K(ks), n0, c).holds


def test_moser_is_unique_up_to_21():
    for N in range(0, 22):
        assert run((1, 2), 1, 0, N).survivor_sets() == {moser_set(2, 2, N).members}


def test_moser_uniqueness_brute_force_16():
    assert brute_survivors((1, 2), 1, 0, 16) == {moser_set(2, 2, 16).members}


def test_budget_and_resume_match_uninterrupted(tmp_path):
    cfg = dict(ks=(1, 2, 4), c=1, n0=0, N=14)
    full = run(**cfg)
    partial = run(**cfg, node_budget=7)
    assert partial.status == "budget-exceeded" and partial.frontier
    path = tmp_path / "ck.json"
    save_checkpoint(partial, str(path))
    ck = load_checkpoint(str(path))
    assert ck == json.loads(json.dumps(partial.checkpoint()))
    out = partial
    while out.status == "budget-exceeded":
        out = resume_search(out.checkpoint(), extra_budget=5)
    assert out.survivor_sets() == full.survivor_sets()
    assert out.nodes_explored == full.nodes_explored
    assert out.nodes_per_depth == full.nodes_per_depth


def test_parallel_matches_serial():
    serial = run((1, 2), 1, 0, 16)
    parallel = search_constant_rep(SearchConfig(K((1, 2)), 1, 0, 16, report_all=True), threads=2)
    assert parallel.survivor_sets() == serial.survivor_sets()
    assert parallel.status == serial.status


def test_outcome_json_shape():
    d = run((1, 2), 1, 0, 5).to_dict()
    json.dumps(d)
    assert d["status"] == "survivors-found"
    assert {"nodes_per_depth", "prunes", "frontier_size", "frontier_depths"} <= set(d["statistics"])
    assert SearchConfig.from_dict(d["config"]) == SearchConfig(K((1, 2)), 1, 0, 5, report_all=True)
