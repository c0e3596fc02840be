"""Command-line front end: ``jacobi <command> ...``.

Every run starts with a one-line configuration header on stdout.  Suite
and certificate failures exit with status 1; malformed input exits with
status 2 and a message on stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .cache import default_cache, set_default_cache
from .combination import Combination, parse_combination, serialize_combination
from .diagram import DiagramError, DiagramSyntaxError, Support
from .quotients import chordify, graded_coordinates, quotient_basis

SUITE_ORDER = (
    "stu4t",
    "slide",
    "pbw",
    "eigen",
    "vogel",
    "psi",
    "bseries",
    "coboundary",
    "pentagon-hexagon",
    "denominators",
)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("-n", "--degree", "--N", dest="N", type=int, default=argparse.SUPPRESS, help="maximal degree / truncation")
    p.add_argument("--cache-dir", default=argparse.SUPPRESS, help="quotient basis cache directory")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for sampled checks")
    p.add_argument("--format", choices=("text", "structured"), default=argparse.SUPPRESS)
    p.add_argument("--max", dest="max_param", type=int, default=argparse.SUPPRESS, help="upper end of obligation ranges")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="jacobi", description=__doc__.splitlines()[0], parents=[common])
    parser.add_argument("--version", action="version", version=f"jacobi-diagrams {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", parents=[common], help="dimension of a graded quotient")
    p.add_argument("support", help='e.g. "S1", "I,I", "I/x", "/v1,v2"')
    p.add_argument("degree", type=int)
    p.add_argument("--method", choices=("full", "chord"))

    p = sub.add_parser("reduce", parents=[common], help="normal form of a combination file")
    p.add_argument("file")

    p = sub.add_parser("chordify", parents=[common], help="expand a combination file into chord diagrams")
    p.add_argument("file")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=SUITE_ORDER + ("all",))
    p.add_argument(
        "--symbolic",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="include the checks with formal anomaly generators (bseries)",
    )

    p = sub.add_parser("denom", parents=[common], help="denominator bounds and certificates")
    dsub = p.add_subparsers(dest="denom_command", required=True)
    b = dsub.add_parser("bound", parents=[common])
    b.add_argument("kind", choices=("d", "D", "D2"))
    b.add_argument("parameter", type=int)
    c = dsub.add_parser("check", parents=[common])
    c.add_argument("obligation", help="obligation id or 'all'")
    c.add_argument("--mutate", action="store_true", help="drop 3^2 from odd d(n) (checker self-test)")

    p = sub.add_parser("anomaly", parents=[common], help="anomaly series tools")
    asub = p.add_subparsers(dest="anomaly_command", required=True)
    inv = asub.add_parser("invert", parents=[common])
    inv.add_argument("--symbolic", type=int, required=True, metavar="N", help="truncation in shifted degree")
    inv.add_argument("--vanish", type=int, action="append", default=[], metavar="S", help="set A_S = 0")

    p = sub.add_parser("cache", parents=[common], help="inspect or clear the basis cache")
    p.add_argument("action", choices=("purge", "stats"))
    return parser


def _settings(args) -> dict:
    return {
        "N": getattr(args, "N", None),
        "seed": getattr(args, "seed", 0),
        "format": getattr(args, "format", "text"),
        "max_param": getattr(args, "max_param", 50),
        "cache_dir": getattr(args, "cache_dir", None),
    }


def _header(cfg: dict) -> str:
    n = "default" if cfg["N"] is None else cfg["N"]
    return f"# jacobi-diagrams {__version__} seed={cfg['seed']} N={n} max={cfg['max_param']} format={cfg['format']}"


def _read_combination(path: str) -> Combination:
    return parse_combination(Path(path).read_text())


def _emit(cfg: dict, key: str, value) -> None:
    if cfg["format"] == "structured":
        print(f"{key}={value}")
    else:
        print(value)


def _record(cfg: dict, key: str, value) -> None:
    sep = "=" if cfg["format"] == "structured" else ": "
    print(f"{key}{sep}{value}")


def cmd_dim(args, cfg) -> int:
    q = quotient_basis(Support.parse(args.support), args.degree, method=args.method)
    _emit(cfg, "dim", q.dim)
    return 0


def cmd_reduce(args, cfg) -> int:
    x = _read_combination(args.file)
    coords = graded_coordinates(x)
    normal = Combination(x.support, {b: v for c in coords.values() for b, v in c.items()})
    if cfg["format"] == "structured":
        for n, c in sorted(coords.items()):
            for b, v in c.items():
                print(f"degree={n} basis={b.hex()} coeff={v}")
        print(f"zero={not coords}")
    else:
        print(serialize_combination(normal), end="")
    return 0


def cmd_chordify(args, cfg) -> int:
    x = chordify(_read_combination(args.file))
    if cfg["format"] == "structured":
        for k, v in x:
            print(f"chord={k.hex()} coeff={v}")
    else:
        print(serialize_combination(x), end="")
    return 0


def cmd_verify(args, cfg) -> int:
    from .suites import SuiteConfig, run_suite

    sc = SuiteConfig(seed=cfg["seed"], N=cfg["N"], max_param=cfg["max_param"], symbolic=args.symbolic)
    names = SUITE_ORDER if args.suite == "all" else (args.suite,)
    ok = True
    for name in names:
        res = run_suite(name, sc)
        ok &= res.passed
        print(res.render(cfg["format"]), end="")
    if len(names) > 1:
        _record(cfg, "overall", "pass" if ok else "fail")
    return 0 if ok else 1


def cmd_denom(args, cfg) -> int:
    from . import denominators as den

    if args.denom_command == "bound":
        b = den.bound(args.kind, args.parameter)
        fac = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(b.factorization.items()))
        if cfg["format"] == "structured":
            print(f"bound={b.label}\nvalue={b.value}\nfactorization={fac}")
        else:
            print(f"{b.label} = {b.value}\n  = {fac}")
        return 0
    bounds = den.Bounds(d=den.without_nine_for_odd_d) if args.mutate else den.STANDARD
    names = list(den.OBLIGATIONS) if args.obligation == "all" else [args.obligation]
    ok = True
    for i, name in enumerate(names):
        cert = den.verify_divisibility(name, cfg["max_param"], bounds)
        ok &= cert.passed
        if i:
            print()
        print(cert.render(), end="")
    return 0 if ok else 1


def cmd_anomaly(args, cfg) -> int:
    from .series import TwoLegSeries, anomaly_identity, invert_anomaly

    N = args.symbolic
    A = TwoLegSeries.symbolic_anomaly(N, vanishing=args.vanish)
    B = invert_anomaly(A)
    for s in range(0, N + 1, 2):
        _record(cfg, f"B_{s}", B.part(s))
    check = anomaly_identity(A, B).is_one()
    _record(cfg, "sum A^(2k+1) B_2k = 1", "pass" if check else "fail")
    return 0 if check else 1


def cmd_cache(args, cfg) -> int:
    cache = default_cache()
    if cache is None:
        print("no cache directory configured (use --cache-dir or JACOBI_CACHE_DIR)", file=sys.stderr)
        return 2
    if args.action == "purge":
        _record(cfg, "removed", cache.purge())
    else:
        for k, v in cache.stats().items():
            _record(cfg, k, v)
    return 0


COMMANDS = {
    "dim": cmd_dim,
    "reduce": cmd_reduce,
    "chordify": cmd_chordify,
    "verify": cmd_verify,
    "denom": cmd_denom,
    "anomaly": cmd_anomaly,
    "cache": cmd_cache,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    cfg = _settings(args)
    if cfg["cache_dir"]:
        set_default_cache(cfg["cache_dir"])
    print(_header(cfg))
    sys.stdout.flush()
    try:
        return COMMANDS[args.command](args, cfg)
    except (DiagramSyntaxError, DiagramError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
