"""Command-line front end.

Exit codes: 0 success, 1 an identity or residual check failed, 2 usage
error (bad flags, unmet preconditions).  Every run echoes its resolved
configuration and seed to standard error as one JSON line.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import identities as ident
from .cache import PolyCache, default_dir
from .families import FamilyKey, build
from .painleve import CHECKS, NumericConfig, sweep
from .serialize import encode
from .ring import to_text

OK, FAILED, USAGE = 0, 1, 2

DEFAULT_VARIANT = {
    "THM1": "reflected",
    "THM2": "umemura",
    "COR2_9": "family",
    "COR2_10": "family",
    "COR2_11": "family",
    "PROP5": "hirota",
    "REM2": "reflected",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _grid(text: str) -> tuple[Fraction, ...]:
    if not text.strip():
        return ()
    return tuple(_fraction(x.strip()) for x in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="umemura", description="Generalized Umemura polynomials: construction and verification.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="construct a polynomial and print it")
    csub = c.add_subparsers(dest="family", required=True, parser_class=_Parser)
    g = csub.add_parser("gen", help="generalized family U_{n,m}^{(k)}")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--k", type=int, default=0)
    g.add_argument("--route", choices=("sum", "det"), default="sum")
    for name, helptext in (("toda", "T_n from the Toda recurrence"), ("noou", "U_n in subset-sum form")):
        s = csub.add_parser(name, help=helptext)
        s.add_argument("--n", type=int, required=True)
    for s in (g, csub.choices["toda"], csub.choices["noou"]):
        s.add_argument("--out", type=Path)
        s.add_argument("--format", choices=("json", "text"), default="json")
        s.add_argument("--dir", type=Path, help="cache directory (enables caching)")

    v = sub.add_parser("verify", help="check one identity")
    v.add_argument("--id", required=True, choices=ident.IDS)
    v.add_argument("--params", type=_int_list, default=())
    v.add_argument("--mode", choices=ident.MODES, default="symbolic")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--variant", default=None, help="reading or convention (default: the adopted one)")

    cat = sub.add_parser("catalog", help="run the whole identity catalog")
    cat.add_argument("--budget", type=int, default=6)
    cat.add_argument("--seed", type=int, default=0)
    cat.add_argument("--out", type=Path)
    cat.add_argument("--timings", action="store_true", help="record wall-clock millis")

    pv = sub.add_parser("painleve", help="high-precision residual sweep")
    pv.add_argument("--check", required=True, choices=CHECKS)
    pv.add_argument("--n", type=int, default=0)
    pv.add_argument("--m", type=int, default=0)
    pv.add_argument("--b1", type=_fraction, default=Fraction(1, 3))
    pv.add_argument("--b2", type=_fraction, default=Fraction(1, 5))
    pv.add_argument("--t-grid", type=_grid, default=NumericConfig().t_grid)
    pv.add_argument("--digits", type=int, default=50)

    ca = sub.add_parser("cache", help="inspect or clear the polynomial cache")
    ca.add_argument("action", choices=("clear", "stats"))
    ca.add_argument("--dir", type=Path)
    return p


def _echo(config: dict) -> None:
    print(json.dumps(config, sort_keys=True, default=str), file=sys.stderr)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        print(text)
    else:
        out.write_text(text + "\n")


def _compute(args) -> int:
    if args.family == "gen":
        fam = "GEN_SUM" if args.route == "sum" else "GEN_DET"
        key = FamilyKey(fam, (args.n, args.m, args.k))
    else:
        key = FamilyKey("TODA_T" if args.family == "toda" else "NOOU_U", (args.n,))
    if min(key.indices) < 0:
        raise UsageError("indices must be nonnegative")
    _echo({"verb": "compute", "key": key.text(), "format": args.format,
           "cache": str(args.dir) if args.dir else None})
    p = PolyCache(args.dir).get_or_build(key) if args.dir else build(key)
    _emit(encode(p) if args.format == "json" else to_text(p), args.out)
    return OK


def _mode(args) -> ident.Mode:
    if args.mode == "symbolic":
        return ident.Mode()
    if args.mode == "modular":
        return ident.Mode("modular", args.trials or 5, 3)
    return ident.Mode("rational_point", args.trials or (20 if args.id == "PROP5" else 5))


def _verify(args) -> int:
    variant = args.variant if args.variant is not None else DEFAULT_VARIANT.get(args.id, "")
    try:
        mode = _mode(args)
    except ValueError as exc:
        raise UsageError(str(exc))
    _echo({"verb": "verify", "id": args.id, "params": list(args.params), "mode": mode.text(),
           "variant": variant, "seed": args.seed})
    try:
        if args.id == "PROP5":
            if len(args.params) != 3 or min(args.params) < 1:
                raise ident.PreconditionError("PROP5 needs k,l,m >= 1")
            rep = ident.verify_hirota_miwa(*args.params, mode=mode, seed=args.seed, gauge=variant)
        elif args.id == "PROP6":
            if len(args.params) != 1 or args.params[0] < 1:
                raise ident.PreconditionError("PROP6 needs m >= 1")
            rep = ident.verify_prop6(*args.params, mode=mode, seed=args.seed)
        else:
            rep = ident.verify(ident.IdentityCase(args.id, args.params, mode, variant), args.seed)
    except ident.PreconditionError as exc:
        raise UsageError(str(exc))
    except (TypeError, ValueError, IndexError) as exc:
        raise UsageError(f"bad parameters for {args.id}: {exc}")
    print(rep.to_json(timings=False))
    return OK if rep.status in ("pass", "recorded") else FAILED


def _catalog(args) -> int:
    if args.budget < 1:
        raise UsageError("budget must be >= 1")
    _echo({"verb": "catalog", "budget": args.budget, "seed": args.seed, "timings": args.timings})
    reports = ident.run_catalog(args.budget, args.seed)
    lines = "\n".join(r.to_json(args.timings) for r in reports)
    _emit(lines, args.out)
    return OK if all(r.status in ("pass", "recorded") for r in reports) else FAILED


def _painleve(args) -> int:
    try:
        cfg = NumericConfig(digits=args.digits, t_grid=args.t_grid)
    except ValueError as exc:
        raise UsageError(str(exc))
    if any(t <= 1 for t in args.t_grid):
        raise UsageError("grid points must satisfy t > 1")
    params = {"n": args.n, "m": args.m, "b1": str(args.b1), "b2": str(args.b2)}
    _echo({"verb": "painleve", "check": args.check, "params": params, "digits": args.digits,
           "grid": [str(t) for t in args.t_grid], "seed": None})
    rep = sweep(args.check, args.t_grid, params, cfg)
    print(rep.to_json())
    return OK if rep.status == "pass" else FAILED


def _cache(args) -> int:
    cache = PolyCache(args.dir if args.dir else default_dir())
    _echo({"verb": "cache", "action": args.action, "dir": str(cache.dir)})
    if args.action == "clear":
        print(json.dumps({"removed": cache.clear()}))
    else:
        print(json.dumps(cache.stats()))
    return OK


HANDLERS = {"compute": _compute, "verify": _verify, "catalog": _catalog,
            "painleve": _painleve, "cache": _cache}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return HANDLERS[args.verb](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
