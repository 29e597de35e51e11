"""Command-line entry point: ``repconst <subcommand> ...``.

Results go to stdout as JSON (profiles may be CSV).  Exit status is 0 exactly
when the computation confirmed what it was asked to confirm.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from . import constructions, cyclotomic, mstructure, repfn, search
from .polyseries import IntPolynomial
from .verify import check_certificate

OUT_DIR_ENV = "REPCONST_OUT_DIR"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BUDGET = 3


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _ks(text: str) -> repfn.CoefficientTuple:
    try:
        return repfn.CoefficientTuple(_ints(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _budget(text: str) -> int:
    try:
        value = int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad budget {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("budget must be positive")
    return value


def _out_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _parse_s(text: str | None) -> dict[tuple[int, ...], int]:
    """``"1,1=1;2,0=3"`` or a path to a JSON list of {"j": [...], "s": n}."""
    if not text:
        return {}
    if os.path.exists(text):
        with open(text) as fh:
            return {tuple(e["j"]): int(e["s"]) for e in json.load(fh)}
    out = {}
    for item in text.split(";"):
        if item.strip():
            j, val = item.split("=")
            out[_ints(j)] = int(val)
    return out


def cmd_repfn(args) -> int:
    A = repfn.SetPrefix.from_json(Path(args.set).read_text())
    profile = repfn.rep_profile(A, args.ks, args.upto)
    if args.format == "json":
        _emit([{"n": n, "count": c, "determined": det} for n, (c, det) in enumerate(profile)])
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["n", "count", "determined"])
        for n, (c, det) in enumerate(profile):
            w.writerow([n, c, int(det)])
    return EXIT_OK


def cmd_moser(args) -> int:
    A = constructions.moser_set(args.k, args.d, args.upto)
    result: dict = {"members": list(A.members), "decided_bound": A.decided_bound}
    status = EXIT_OK
    if args.verify:
        K = constructions.moser_tuple(args.k, args.d)
        verdict = repfn.constancy_check(A, K, 0, 1)
        result["verify"] = {"ks": list(K.ks), "status": verdict.status, "horizon": verdict.horizon, "at": verdict.at}
        status = EXIT_OK if verdict.status != "violated" else EXIT_FAILED
    if args.out:
        _out_path(args.out).write_text(A.to_json())
    _emit(result)
    return status


def cmd_cyclotomic(args) -> int:
    if args.multiplicity is not None:
        order, path = args.multiplicity
        try:
            order = int(order)
        except ValueError:
            raise SystemExit(f"cyclotomic --multiplicity expects an integer order, got {order!r}") from None
        p = IntPolynomial.from_json(Path(path).read_text())
        s, rest = cyclotomic.multiplicity_in_poly(p, order)
        _emit({"n": order, "s": s, "residual": list(rest.coeffs)})
        return EXIT_OK
    if args.n is None:
        raise SystemExit("cyclotomic needs an order n")
    print(json.dumps(list(cyclotomic.cyclotomic_poly(args.n).coeffs), separators=(",", ":")))
    return EXIT_OK


def _solve_report(res) -> dict:
    table = res.table if isinstance(res, mstructure.Conflict) else res
    out = {
        "values": [{"j": list(i), "r": r, "from": list(table.provenance[i])} for i, r in sorted(table.in_box().items())],
    }
    if isinstance(res, mstructure.Conflict):
        out["conflict"] = {"at": list(res.at), "kind": res.kind, "reason": res.reason}
    return out


def cmd_solve(args) -> int:
    res = mstructure.solve_multiplicities(args.ks, _parse_s(args.s), args.box)
    _emit(_solve_report(res))
    return EXIT_OK


def cmd_certify(args) -> int:
    cert = mstructure.certify_nonconstant(args.ks, args.t, args.target)
    problems = check_certificate(cert.to_dict())
    if args.out:
        _out_path(args.out).write_text(cert.to_json())
    _emit(cert.to_dict())
    if problems:
        print("generated certificate failed replay: " + "; ".join(problems), file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        data = json.loads(Path(args.file).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"INVALID: {exc}")
        return EXIT_FAILED
    problems = check_certificate(data)
    if problems:
        print("INVALID")
        for p in problems:
            print(f"  {p}")
        return EXIT_FAILED
    print("VALID")
    return EXIT_OK


def cmd_search(args) -> int:
    if args.resume:
        outcome = search.resume_search(search.load_checkpoint(args.resume), args.budget)
    else:
        if args.ks is None or args.c is None or args.upto is None:
            raise SystemExit("search needs --ks, --c and --upto (or --resume)")
        cfg = search.SearchConfig(args.ks, args.c, args.n0, args.upto, args.budget or 10**7, args.report_all)
        outcome = search.search_constant_rep(cfg, threads=args.threads)
    if args.checkpoint:
        search.save_checkpoint(outcome, str(_out_path(args.checkpoint)))
    _emit(outcome.to_dict())
    return EXIT_BUDGET if outcome.status == "budget-exceeded" else EXIT_OK


def cmd_demo(args) -> int:
    K = args.ks
    report: dict = {"ks": list(K.ks)}
    form = K.theorem_form()
    report["theorem_form"] = {"q": list(form.qs), "b": [list(r) for r in form.b]}

    conflict = None
    for e in range(args.max_box + 1):
        res = mstructure.solve_multiplicities(K, {}, (e,) * form.m)
        if isinstance(res, mstructure.Conflict):
            conflict = {"box": [e] * form.m, "at": list(res.at), "kind": res.kind, "reason": res.reason}
            break
    report["solver"] = conflict or {"conflict": None}

    t = args.t if args.t is not None else (1,) * form.m
    cert = mstructure.certify_nonconstant(K, t)
    valid = not check_certificate(json.loads(cert.to_json()))
    report["certificate"] = {
        "t": list(t),
        "working_box": list(cert.working_box),
        "relations_used": len(cert.steps),
        "target": list(cert.target),
        "verified": valid,
    }

    runs = []
    for c in (1, 2):
        for n0 in range(args.search_n0 + 1):
            cfg = search.SearchConfig(K, c, n0, args.search_upto, 10**6, True)
            outcome = search.search_constant_rep(cfg)
            runs.append({"c": c, "n0": n0, "status": outcome.status, "nodes_explored": outcome.nodes_explored})
    report["search"] = {"N": args.search_upto, "runs": runs}
    searched_out = all(r["status"] == "exhausted-no-survivor" for r in runs)
    ok = conflict is not None and valid and searched_out
    report["confirmed"] = ok
    _emit(report)
    return EXIT_OK if ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repconst", description="Representation functions, cyclotomic multiplicities and non-constancy certificates."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("repfn", help="representation profile of a set prefix")
    p.add_argument("--set", required=True, help='JSON {"members": [...], "decided_bound": M}')
    p.add_argument("--ks", type=_ks, required=True)
    p.add_argument("--upto", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_repfn)

    p = sub.add_parser("moser", help="Moser set for (1, k, ..., k^(d-1))")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--upto", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_moser)

    p = sub.add_parser("cyclotomic", help="cyclotomic polynomial or multiplicity")
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("--multiplicity", nargs=2, metavar=("N", "FILE"), help="multiplicity of Phi_N in a polynomial JSON file")
    p.set_defaults(func=cmd_cyclotomic)

    p = sub.add_parser("solve", help="solve the multiplicity recurrence in a box")
    p.add_argument("--ks", type=_ks, required=True)
    p.add_argument("--box", type=_ints, required=True)
    p.add_argument("--s", help='nonzero s entries, e.g. "1,1=1;2,0=3", or a JSON file')
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("certify", help="produce a non-constancy certificate")
    p.add_argument("--ks", type=_ks, required=True)
    p.add_argument("--t", type=_ints, required=True)
    p.add_argument("--target", type=_ints)
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="replay a certificate file")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="exhaustive search for constant representation")
    p.add_argument("--ks", type=_ks)
    p.add_argument("--c", type=int)
    p.add_argument("--n0", type=int, default=0)
    p.add_argument("--upto", type=int)
    p.add_argument("--budget", type=_budget)
    p.add_argument("--report-all", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--checkpoint", help="write the pending frontier here")
    p.add_argument("--resume", help="continue from a checkpoint file")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("demo", help="end-to-end non-constancy pipeline for one tuple")
    p.add_argument("--ks", type=_ks, required=True)
    p.add_argument("--t", type=_ints)
    p.add_argument("--max-box", type=int, default=6)
    p.add_argument("--search-upto", type=int, default=20)
    p.add_argument("--search-n0", type=int, default=5, help="corroborate for every start n0 up to this")
    p.set_defaults(func=cmd_demo)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, mstructure.CertificateSearchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


def main() -> None:
    sys.exit(run())
