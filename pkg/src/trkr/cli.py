"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 audit or check failure.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from .braid import BraidError, enumerate_resolved, parse_braid, parse_resolved, transverse_move
from .homology import DegreeWindow, sln_homology, total_homology
from .moyoracle import NegativeCoefficient, reduce_series, truncate_series
from .report import dumps, module_lines, report_json, report_text, series_json, series_text
from .verify import (audit_report, cone_pi0_check, oracle_check, stab_check, unknot_check)


class UsageError(Exception):
    pass


def _braid(text: str):
    try:
        return parse_braid(text)
    except BraidError as exc:
        raise UsageError(str(exc)) from None


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(dumps(payload))
    else:
        print(text)
    if getattr(args, "timing", False):
        print(f"elapsed {time.perf_counter() - args._t0:.2f}s", file=sys.stderr)


def _verdict_text(title: str, v: dict) -> str:
    lines = [f"{title}: {'PASS' if v['passed'] else 'FAIL'}"]
    lines += [f"  {f}" for f in v["failures"][:20]]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_homology(args) -> int:
    B = _braid(args.braid)
    R = total_homology(B, args.N, args.kmax)
    if not args.no_audit:
        audit_report(R, parity=not args.no_parity)
    _emit(args, report_json(R), report_text(R))
    return 0 if all(a["passed"] for a in R.audits.values()) else 2


def cmd_sln(args) -> int:
    B = _braid(args.braid)
    dims = sln_homology(B, args.N, args.kmax)
    payload = {"braid": str(B), "N": args.N,
               "sln": [{"eps": e, "i": i, "k": k, "dim": d} for (e, i, k), d in sorted(dims.items())]}
    text = "\n".join([f"braid {B}  N={args.N}"] +
                     [f"ε={e} i={i} k={k}: {d}" for (e, i, k), d in sorted(dims.items())])
    _emit(args, payload, text)
    return 0


def cmd_oracle(args) -> int:
    if args.sweep:
        fails = []
        count = 0
        for G in enumerate_resolved(args.max_weight, args.max_strands):
            for N in args.sweep_N:
                v = oracle_check(G, N, depth=args.depth)
                fails += v["failures"]
                count += 1
        payload = {"checked": count, "passed": not fails, "failures": fails}
        _emit(args, payload, _verdict_text(f"oracle sweep over {count} (word, N) pairs", payload))
        return 0 if not fails else 2
    if not args.word:
        raise UsageError("oracle needs --word or --sweep")
    try:
        G = parse_resolved(args.word)
    except BraidError as exc:
        raise UsageError(str(exc)) from None
    try:
        S, trace = reduce_series(G, args.N, args.variant)
    except NegativeCoefficient as exc:
        payload = {"word": str(G), "error": str(exc),
                   "trace": [vars(s) for s in exc.trace]}
        _emit(args, payload, f"negative coefficient: {exc}")
        return 2
    payload = {"word": str(G), "N": args.N, "series": series_json(S),
               "trace": [vars(s) for s in trace.steps]}
    text = [f"word {G}  N={args.N}  variant={args.variant}", series_text(S)]
    code = 0
    if args.kmax is not None:
        w = DegreeWindow(-G.strands, 0, -G.strands * (args.N + 1) - 2 * len(G.letters), args.kmax)
        dims = truncate_series(S, w)
        payload["window"] = w.to_json()
        payload["dims"] = [{"part": p, "eps": e, "j": j, "k": k, "dim": d}
                           for (p, e, j, k), d in sorted(dims.items())]
    if args.check:
        v = oracle_check(G, args.N, kmax=args.kmax) if args.kmax is not None else oracle_check(G, args.N)
        payload["check"] = v
        text.append(_verdict_text("direct comparison", v))
        code = 0 if v["passed"] else 2
    _emit(args, payload, "\n".join(text))
    return code


def cmd_compare(args) -> int:
    A, B = _braid(args.braid_a), _braid(args.braid_b)
    kmax = args.kmax if args.kmax is not None else 2 * args.N + 2 * max(A.crossings, B.crossings) + 5
    RA = total_homology(A, args.N, kmax, with_sln=False)
    RB = total_homology(B, args.N, kmax, with_sln=False)
    MA, MB = RA.module.restrict(kmax=kmax), RB.module.restrict(kmax=kmax)
    equal = MA == MB
    payload = {"braid_a": str(A), "braid_b": str(B), "N": args.N, "kmax": kmax,
               "result": "EQUAL" if equal else "DIFFERENT",
               "a": MA.to_json(), "b": MB.to_json()}
    text = [f"{'EQUAL' if equal else 'DIFFERENT'}  ({A} vs {B}, N={args.N}, k<={kmax})"]
    if not equal:
        text += ["a:"] + ["  " + s for s in module_lines(MA, kmax)]
        text += ["b:"] + ["  " + s for s in module_lines(MB, kmax)]
    _emit(args, payload, "\n".join(text))
    return 0


def cmd_unknot(args) -> int:
    v, R = unknot_check(args.m, args.N, args.kmax)
    _emit(args, {"check": v, "report": report_json(R)},
          _verdict_text(f"U_{args.m} N={args.N}", v) + "\n" + report_text(R))
    return 0 if v["passed"] else 2


def cmd_stab(args) -> int:
    v = stab_check(_braid(args.braid), args.N, args.kmax)
    _emit(args, v, _verdict_text(f"stabilization sequences for {args.braid}", v))
    return 0 if v["passed"] else 2


def cmd_cone(args) -> int:
    v = cone_pi0_check(_braid(args.braid), args.N, args.kmax)
    _emit(args, v, _verdict_text(f"cone(pi0) identity for {args.braid}", v))
    return 0 if v["passed"] else 2


def cmd_moves(args) -> int:
    B = _braid(args.braid)
    try:
        B2 = transverse_move(B, args.move, args.arg)
    except BraidError as exc:
        raise UsageError(str(exc)) from None
    payload = {"braid": str(B), "move": args.move, "arg": args.arg, "result": str(B2)}
    text = [f"{B} --{args.move}--> {B2}"]
    code = 0
    if args.N is not None:
        kmax = args.kmax if args.kmax is not None else 2 * args.N + 2 * max(B.crossings, B2.crossings) + 5
        M1 = total_homology(B, args.N, kmax, with_sln=False).module.restrict(kmax=kmax)
        M2 = total_homology(B2, args.N, kmax, with_sln=False).module.restrict(kmax=kmax)
        same = M1 == M2
        payload["invariant"] = same
        text.append("homology unchanged" if same else "homology changed")
        if not same and args.move != "stab_neg":
            code = 2
    _emit(args, payload, "\n".join(text))
    return code


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trkr", description="Transverse Khovanov-Rozansky homology of closed braids.")
    p.add_argument("--version", action="version", version=f"trkr {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, braid=True, N=True):
        if braid:
            sp.add_argument("--braid", required=True, help='braid word, e.g. "b=2; 1 -1"')
        if N:
            sp.add_argument("-N", type=int, required=True)
        sp.add_argument("--kmax", type=int, default=None, help="top x-degree of the window")
        sp.add_argument("--format", choices=("json", "text"), default="text")
        sp.add_argument("--timing", action="store_true", help="print elapsed time to stderr")

    sp = sub.add_parser("homology", help="bigraded Q[a]-module homology with audits")
    common(sp)
    sp.add_argument("--no-audit", action="store_true")
    sp.add_argument("--no-parity", action="store_true", help="skip the per-resolution parity audit")
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("sln", help="the a = 1 specialization")
    common(sp)
    sp.set_defaults(func=cmd_sln)

    sp = sub.add_parser("oracle", help="MOY rewrite series of a closed resolved braid")
    common(sp, braid=False, N=False)
    sp.add_argument("--word", help='resolved word, e.g. "b=3; t1 t2"')
    sp.add_argument("-N", type=int, default=2)
    sp.add_argument("--variant", choices=("triple", "sln"), default="triple")
    sp.add_argument("--check", action="store_true", help="compare with the direct computation")
    sp.add_argument("--sweep", action="store_true", help="check every word up to the given size")
    sp.add_argument("--max-weight", type=int, default=6)
    sp.add_argument("--max-strands", type=int, default=4)
    sp.add_argument("--sweep-N", type=int, nargs="+", default=[1, 2])
    sp.add_argument("--depth", type=int, default=6, help="k-depth above the lowest generator")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("compare", help="compare two braids' homology")
    common(sp, braid=False)
    sp.add_argument("--braid-a", required=True)
    sp.add_argument("--braid-b", required=True)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("unknot-check", help="check U_m against its closed form")
    common(sp, braid=False)
    sp.add_argument("-m", type=int, required=True)
    sp.set_defaults(func=cmd_unknot)

    sp = sub.add_parser("stab-check", help="stabilization sequence identities")
    common(sp)
    sp.set_defaults(func=cmd_stab)

    sp = sub.add_parser("cone-check", help="cone of the quotient map vs negative stabilization")
    common(sp)
    sp.set_defaults(func=cmd_cone)

    sp = sub.add_parser("moves", help="apply a transverse move, optionally checking invariance")
    sp.add_argument("--braid", required=True)
    sp.add_argument("--move", required=True,
                    choices=("stab_pos", "destab_pos", "stab_neg", "conjugate", "braid_relation"))
    sp.add_argument("--arg", type=int, default=None, help="site or conjugating letter")
    sp.add_argument("-N", type=int, default=None, help="also compare homology at this N")
    sp.add_argument("--kmax", type=int, default=None)
    sp.add_argument("--format", choices=("json", "text"), default="text")
    sp.add_argument("--timing", action="store_true")
    sp.set_defaults(func=cmd_moves)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    args._t0 = time.perf_counter()
    N = getattr(args, "N", None)
    if N is not None and N < 1:
        print(dumps({"error": "usage", "message": "N must be a positive integer"}), file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(dumps({"error": "usage", "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
