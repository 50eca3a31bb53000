"""Command-line interface.

Subcommands: analyze (critical data of a map), certify (maximality
certificate), kappa (the invariant list), verify (randomized suites),
group (parity-group queries).  All output is line-oriented ``key: value``
text under a versioned header; a given (input, seed, flags) triple always
produces byte-identical output.

Exit codes: 0 success / full group; 1 certificate NotFull or suite
failure; 2 parse error; 3 degenerate or non-colliding map; 4 a critical
orbit hits the base point (certificate DegenerateCriticalHit); 5
inconclusive.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import tree_group as tg
from .certify import certify_max
from .dynamics import (
    DegenerateMapError,
    detect_collision,
    format_point,
    normal_form,
    parse_map_text,
)
from .exact_field import QuadElem, format_elem, is_square_Q, is_square_quad
from .suites import ALL_SUITES, run_suites

HEADER = "arbocert v1"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_DEGENERATE = 3


def _read_input(args) -> str:
    if args.input == "-":
        return sys.stdin.read()
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ValueError(f"cannot read input: {exc}") from exc


def _load_map(args):
    qmap, x0 = parse_map_text(_read_input(args))
    return qmap, x0


def _parse_label(text: str) -> tuple:
    if text in ("-", "root", ""):
        return ()
    if any(ch not in "01" for ch in text):
        raise ValueError(f"node label must be a 0/1 string, got {text!r}")
    return tuple(int(ch) for ch in text)


def cmd_analyze(args, out) -> int:
    qmap, _ = _load_map(args)
    print(HEADER, file=out)
    print("command: analyze", file=out)
    print(f"critical-point-1: {format_point(qmap.xi1)}", file=out)
    print(f"critical-point-2: {format_point(qmap.xi2)}", file=out)
    print(f"delta: {qmap.delta}", file=out)
    print(f"delta-square: {'yes' if qmap.delta == 1 else 'no'}", file=out)
    col = detect_collision(qmap, max_iter=args.max_iter)
    if col is None:
        print(f"collision: none within {args.max_iter} iterates", file=out)
        return EXIT_OK
    print(f"collision: ell={col.ell}", file=out)
    print(f"xi1: {format_point(col.xi1)}", file=out)
    print(f"xi2: {format_point(col.xi2)}", file=out)
    if qmap.delta == 1:
        nf = normal_form(qmap, col)
        print(f"normal-form: {format_elem(nf.A)} {format_elem(nf.B)} "
              f"{format_elem(nf.C)}", file=out)
    else:
        print("normal-form: none over Q (delta not a square)", file=out)
    return EXIT_OK


def cmd_certify(args, out) -> int:
    qmap, x0 = _load_map(args)
    if x0 is None:
        raise ValueError("certify needs an x0: line in the map input")
    col = detect_collision(qmap, max_iter=args.max_iter)
    if col is None:
        print(HEADER, file=out)
        print("command: certify", file=out)
        print(f"error: no collision within {args.max_iter} iterates", file=out)
        return EXIT_DEGENERATE
    cert = certify_max(qmap, x0, args.N, col, disc_cap=args.guard_override)
    print(HEADER, file=out)
    print("command: certify", file=out)
    out.write(cert.to_text())
    if cert.verdict == "NotFull":
        # self-audit: re-multiply the witness subset and square-test it
        values = cert.kappas.values()
        prod = 1
        for i in cert.witness:
            v = values[i - 1]
            prod = (v if isinstance(v, QuadElem) else Fraction(v)) * prod
        if isinstance(prod, QuadElem):
            ok = is_square_quad(prod)
        elif qmap.delta == 1:
            ok = is_square_Q(prod)
        else:
            ok = is_square_Q(prod) or is_square_Q(prod * qmap.delta)
        print(f"witness-audit: {'ok' if ok else 'MISMATCH'}", file=out)
        if not ok:
            raise AssertionError("witness product failed the square re-test")
    return cert.exit_code


def cmd_kappa(args, out) -> int:
    from .dynamics import kappa_list
    qmap, x0 = _load_map(args)
    if x0 is None:
        raise ValueError("kappa needs an x0: line in the map input")
    col = detect_collision(qmap, max_iter=args.max_iter)
    if col is None:
        print(HEADER, file=out)
        print("command: kappa", file=out)
        print(f"error: no collision within {args.max_iter} iterates", file=out)
        return EXIT_DEGENERATE
    lst = kappa_list(qmap, x0, args.N, col, disc_cap=args.guard_override)
    print(HEADER, file=out)
    print("command: kappa", file=out)
    print(f"ell: {col.ell}", file=out)
    print(f"delta: {lst.delta}", file=out)
    print(f"N: {lst.N}", file=out)
    for e in lst.entries:
        flag = f" zero={e.zero_reason}" if e.zero_reason else ""
        print(f"kappa-{e.n}: {format_elem(e.value)} case={e.case}{flag}", file=out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    names = args.suite if args.suite else None
    results = run_suites(names, seed=args.seed, precision=args.precision)
    print(HEADER, file=out)
    print("command: verify", file=out)
    print(f"seed: {args.seed}", file=out)
    print(f"precision: {args.precision}", file=out)
    failed = False
    for r in results:
        status = "pass" if r.ok else "FAIL"
        print(f"suite-{r.name}: {status} checks={r.checks}", file=out)
        for c in r.failures:
            print(f"counterexample-{r.name}: {c}", file=out)
            failed = True
    print(f"result: {'FAIL' if failed else 'pass'}", file=out)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_group(args, out) -> int:
    print(HEADER, file=out)
    print("command: group", file=out)
    q = args.query
    if q == "order":
        ell, n = int(args.args[0]), int(args.args[1])
        print(f"order: {1 << tg.M_order_log2(ell, n)}", file=out)
        print(f"order-log2: {tg.M_order_log2(ell, n)}", file=out)
        return EXIT_OK
    if q == "member":
        sigma = tg.TreeAut.from_hex(args.args[0])
        ell = int(args.args[1])
        sign = tg.mtilde_common_sign(sigma, ell)
        if sign is None:
            print("member: no", file=out)
        else:
            group = "M" if sign == 1 else "Mtilde \\ M"
            print(f"member: in {group}, common sign "
                  f"{'+1' if sign == 1 else '-1'}", file=out)
        return EXIT_OK
    if q == "abelianize":
        sigma = tg.TreeAut.from_hex(args.args[0])
        ell = int(args.args[1])
        vec = tg.abelianize(sigma, ell)
        print("abelianize: " + " ".join("+1" if e == 1 else "-1" for e in vec),
              file=out)
        return EXIT_OK
    if q == "cousins":
        sigma = tg.TreeAut.from_hex(args.args[0])
        x = _parse_label(args.args[1])
        ell, n = int(args.args[2]), int(args.args[3])
        parity = tg.cousins_parity(sigma, x, ell, n)
        print(f"cousins: {'Even' if parity == 1 else 'Odd'}", file=out)
        return EXIT_OK
    raise ValueError(f"unknown group query: {q!r}")


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="arbocert",
        description="Arboreal maximality certificates for quadratic maps "
                    "with colliding critical orbits.")
    sub = top.add_subparsers(dest="subcommand", required=True)

    def map_flags(p):
        p.add_argument("--input", default="-",
                       help="map text file ('-' for stdin): lines "
                            "'P: c0 c1 c2', 'Q: c0 c1 c2', 'x0: s t'")
        p.add_argument("--N", type=int, default=6,
                       help="number of kappa invariants / tree depth")
        p.add_argument("--max-iter", type=int, default=20,
                       help="collision search bound")
        p.add_argument("--guard-override", type=int, default=8,
                       help="cap on the collision level ell in exact "
                            "discriminant computations")

    p = sub.add_parser("analyze", help="critical points, delta, collision")
    map_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify", help="maximality certificate at level N")
    map_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("kappa", help="the kappa invariant list")
    map_flags(p)
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("verify", help="run the randomized verification suites")
    p.add_argument("--suite", action="append", choices=sorted(ALL_SUITES),
                   help="run only the named suite (repeatable)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--precision", type=int, default=256,
                   help="working precision in bits for numeric suites")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("group", help="parity-group queries")
    p.add_argument("query", choices=["order", "member", "abelianize", "cousins"])
    p.add_argument("args", nargs="*",
                   help="order ELL N | member HEX ELL | abelianize HEX ELL "
                        "| cousins HEX LABEL ELL N")
    p.set_defaults(func=cmd_group)
    return top


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else 0
    try:
        return args.func(args, sys.stdout)
    except DegenerateMapError as exc:
        print(HEADER)
        print(f"error: degenerate map: {exc}")
        return EXIT_DEGENERATE
    except (ValueError, IndexError) as exc:
        print(HEADER)
        print(f"error: {exc}")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
