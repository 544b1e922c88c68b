"""Command-line entry point ``torica``.

Exit codes:
    0  success
    1  configuration error (bad flags, unreadable or malformed input)
    2  fan validation failure
    3  divisor not ample
    4  verification failure (a check or claim failed)
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import adjunction, bogomolov, bounds, divisors, fan, harness
from .errors import FanError, NotAmple, ToricaError

EXIT_OK, EXIT_CONFIG, EXIT_FAN, EXIT_NOT_AMPLE, EXIT_FAILED = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _nonneg(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {s}")
    return v


def _int_list(s: str) -> list[int]:
    try:
        out = sorted({int(x) for x in s.split(",") if x.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}")
    if not out or out[0] < 1:
        raise argparse.ArgumentTypeError("ranks must be positive")
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, out: str | None) -> None:
    _emit(json.dumps(obj, indent=2) + "\n", out)


def _load_fan(path: str) -> fan.Fan:
    try:
        return fan.load_fan(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise _ConfigError(str(exc)) from exc
    except ValueError as exc:
        raise FanError(str(exc)) from exc


def _load_divisor(S: fan.Fan, path: str):
    try:
        return divisors.load_divisor(S, path)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise _ConfigError(str(exc)) from exc


class _ConfigError(Exception):
    pass


# -- subcommands ------------------------------------------------------------


def cmd_fan(args) -> int:
    S = _load_fan(args.file)
    if args.action == "validate":
        _emit_json({"valid": True, "e": S.e}, args.out)
        return EXIT_OK
    K = divisors.canonical_class(S)
    _emit_json(
        {
            "e": S.e,
            "rays": [list(v) for v in S.rays],
            "profile": list(S.profile),
            "canonical_profile": list(S.canonical),
            "K2": K.square,
            "K2_equals_12_minus_e": K.square == 12 - S.e,
            "profile_sum_ok": sum(S.profile) == 12 - 3 * S.e,
            "picard_rank": S.picard_rank,
            "minus_one_rays": fan.minus_one_rays(S),
        },
        args.out,
    )
    return EXIT_OK


def cmd_divisor(args) -> int:
    S = _load_fan(args.fan)
    L, form = _load_divisor(S, args.div)
    ample = divisors.is_ample(L)
    report = {
        "form": form,
        **divisors.divisor_to_json(L),
        "normalized": list(divisors.normalize(L).coefficients),
        "square": L.square,
        "anticanonical_degree": divisors.anticanonical_degree(L),
        "nef": divisors.is_nef(L),
        "ample": ample,
    }
    try:
        report["genus"] = divisors.sectional_genus(L)
    except ArithmeticError:
        report["genus"] = None
    _emit_json(report, args.out)
    return EXIT_OK if ample else EXIT_NOT_AMPLE


def cmd_adjoin(args) -> int:
    S = _load_fan(args.fan)
    L, _ = _load_divisor(S, args.div)
    seq = adjunction.iterated_sequence(S, L)
    report = seq.to_json()
    report["terminal"] = seq.terminal.to_json()
    if seq.length >= 1:
        chk = adjunction.telescoped_genus_check(seq)
        report["telescoped_genus"] = {**chk.diff(), "ok": chk.ok}
    _emit_json(report, args.out)
    return EXIT_OK


def cmd_bounds(args) -> int:
    if args.action == "eval":
        if args.r is None or args.e is None:
            raise _ConfigError("bounds eval needs --r and --e")
        r, e = args.r, args.e
        if e < 7:
            raise _ConfigError("the bound needs e >= 7")
        report = {
            "r": r,
            "e": e,
            "b": bounds.adjunction_depth(e),
            "bound": bounds._num(bounds.c1sq_lower_bound(r, e)),
            "c2_lower_bound_rank2": bounds._num(bounds.c2_lower_bound(e)),
            "conjectured_c2_bound": bounds._num(bounds.conjectured_c2_bound(r, e)),
        }
        _emit_json(report, args.out)
        return EXIT_OK
    if args.action == "surface":
        if args.rmin > args.rmax or args.emin > args.emax or args.emin < 7:
            raise _ConfigError("need rmin <= rmax and 7 <= emin <= emax")
        rows = bounds.emit_bound_surface(range(args.rmin, args.rmax + 1), range(args.emin, args.emax + 1), args.scaled)
        _emit(bounds.surface_csv(rows), args.out)
        return EXIT_OK
    reports = bounds.intro_claims_check()
    _emit_json([r.claim_json() for r in reports], args.out)
    return EXIT_OK if all(r.verdict for r in reports) else EXIT_FAILED


def cmd_verify(args) -> int:
    inv = harness.enumerate_surfaces(args.emax, args.amax)
    res = harness.run_verification(inv, args.tmax, args.r, e_min=args.emin, workers=args.workers)
    _emit_json(res.to_json(), args.out)
    return EXIT_OK if res.ok else EXIT_FAILED


def cmd_enumerate(args) -> int:
    inv = harness.enumerate_surfaces(args.emax, args.amax)
    _emit_json(inv.to_json(), args.out)
    return EXIT_OK


def cmd_bogomolov(args) -> int:
    S = _load_fan(args.fan)
    H, _ = _load_divisor(S, args.h)
    if not divisors.is_ample(H):
        raise NotAmple(f"det class {H!r} is not ample")
    if args.action == "search":
        W = _load_divisor(S, args.witness)[0] if args.witness else None
        cands = bogomolov.destabilizer_search(S, H, args.c2, args.box, W)
        _emit_json(
            {
                "c1_sq": H.square,
                "c2": args.c2,
                "box": args.box,
                "note": bogomolov.POSITIVITY_NOTE,
                "candidates": [c.to_json() for c in cands],
            },
            args.out,
        )
        return EXIT_OK
    rep = bogomolov.bog_restriction_check(S, H, args.c2, args.box, instance=args.h)
    _emit_json(rep.to_json(), args.out)
    return EXIT_OK if rep.verdict else EXIT_FAILED


def cmd_table1(args) -> int:
    reports = bounds.verify_table1()
    rows = bounds.table1_catalogue()
    out = []
    for row, rep in zip(rows, reports):
        out.append(
            {
                "surface": row.surface,
                "e": row.e,
                "bundle": row.construction,
                "c1_sq": row.c1_sq,
                "c2": row.c2 if row.c2 is not None else ">=7 open",
                "label": row.label,
                "recomputed": rep.to_json(),
            }
        )
    _emit_json(out, args.out)
    return EXIT_OK if all(r.verdict for r in reports) else EXIT_FAILED


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="torica", description="Toric surfaces, adjunction and Chern-class bounds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def out(sp):
        sp.add_argument("--out", help="write output here instead of stdout")

    sp = sub.add_parser("fan", help="validate a fan or print its invariants")
    sp.add_argument("action", choices=["validate", "info"])
    sp.add_argument("file")
    out(sp)
    sp.set_defaults(func=cmd_fan)

    sp = sub.add_parser("divisor", help="report on a divisor class")
    sp.add_argument("action", choices=["check"])
    sp.add_argument("--fan", required=True)
    sp.add_argument("--div", required=True)
    out(sp)
    sp.set_defaults(func=cmd_divisor)

    sp = sub.add_parser("adjoin", help="run the iterated adjunction sequence")
    sp.add_argument("--fan", required=True)
    sp.add_argument("--div", required=True)
    out(sp)
    sp.set_defaults(func=cmd_adjoin)

    sp = sub.add_parser("bounds", help="evaluate the c1^2 bound, emit its surface, or sweep claims")
    sp.add_argument("action", nargs="?", choices=["eval", "surface", "claims"], default="eval")
    sp.add_argument("--r", type=_positive)
    sp.add_argument("--e", type=_positive)
    sp.add_argument("--rmin", type=_positive, default=1)
    sp.add_argument("--rmax", type=_positive, default=20)
    sp.add_argument("--emin", type=_positive, default=13)
    sp.add_argument("--emax", type=_positive, default=100)
    sp.add_argument("--scaled", action="store_true")
    out(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("verify", help="exhaustive verification sweep")
    sp.add_argument("--emax", type=_positive, default=9)
    sp.add_argument("--emin", type=_positive, default=5)
    sp.add_argument("--amax", type=_positive, default=3)
    sp.add_argument("--tmax", type=_positive, default=4)
    sp.add_argument("--r", type=_int_list, default=[1, 2, 3])
    sp.add_argument("--workers", type=_positive, help="defaults to TORICA_THREADS or the CPU count")
    out(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("enumerate", help="list surfaces by blowup closure")
    sp.add_argument("--emax", type=_positive, default=10)
    sp.add_argument("--amax", type=_positive, default=3)
    out(sp)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("bogomolov", help="destabilizer search or the restriction check")
    sp.add_argument("action", choices=["search", "restrict"])
    sp.add_argument("--fan", required=True)
    sp.add_argument("--h", required=True, help="divisor file for det E")
    sp.add_argument("--c2", type=int, required=True)
    sp.add_argument("--box", type=_nonneg, default=4)
    sp.add_argument("--witness", help="ample divisor file for the positivity test")
    out(sp)
    sp.set_defaults(func=cmd_bogomolov)

    sp = sub.add_parser("table1", help="recompute the rank-2 catalogue")
    out(sp)
    sp.set_defaults(func=cmd_table1)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FanError as exc:
        print(f"fan validation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAN
    except NotAmple as exc:
        print(f"not ample: {exc}", file=sys.stderr)
        return EXIT_NOT_AMPLE
    except (_ConfigError, ToricaError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
