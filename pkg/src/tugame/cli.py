import argparse
import logging
import sys
from typing import List, Optional

from tugame.config import (
    DEFAULT_VERIFY_GAMES,
    DEFAULT_VERIFY_PLAYERS,
    VERSION,
    effective_settings,
    get_workers,
    set_setting,
)
from tugame.errors import TuGameError, VectorFormatError
from tugame.modes.audit import run_rgp_audit
from tugame.modes.catalog import run_catalog
from tugame.modes.leastcore import run_balanced, run_core, run_kohlberg, run_leastcore
from tugame.modes.props import run_props, run_shapley
from tugame.modes.solve import run_oracle, run_prekernel, run_prenucleolus, run_stearns, run_surplus
from tugame.modes.verify import run_verify

EXIT_USAGE = 1
EXIT_INPUT = 2


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _players_list(text: str) -> List[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated player counts, got {text!r}")
    if not values or any(n < 2 for n in values):
        raise argparse.ArgumentTypeError("player counts must be at least 2")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", dest="as_json", action="store_true", help="Emit the JSON report envelope")
    common.add_argument("--output", default=None, help="Write the report to this path")
    common.add_argument("--quiet", action="store_true", help="Minimize output")
    common.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    common.add_argument("--workers", type=int, default=None,
                        help="Parallel workers for probes and batches (default: config or 4)")

    p = _Parser(
        prog="tugame",
        description="Exact-arithmetic TU cooperative games: pre-kernel, pre-nucleolus, least-core, audits",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("prekernel", parents=[common], help="Pre-kernel by the conjugation solver")
    s.add_argument("game")
    s.add_argument("--start", default=None, help="Start allocation x1,x2,... (default: equal split)")
    s.add_argument("--trace", action="store_true", help="Print the class system of every iteration")

    s = sub.add_parser("prenucleolus", parents=[common], help="Pre-nucleolus with an optional cross-check")
    s.add_argument("game")
    s.add_argument("--method", choices=["conjugation", "lp-oracle", "both"], default="both")

    s = sub.add_parser("stearns", parents=[common], help="Kernel approximation by maximal transfers")
    s.add_argument("game")
    s.add_argument("--start", required=True, help="Start imputation x1,x2,...")
    s.add_argument("--tol", default=None, help="Relative tolerance p/q (default 1/1000000000)")
    s.add_argument("--max-steps", dest="max_steps", type=int, default=None)

    s = sub.add_parser("leastcore", parents=[common], help="Least-core value, witness and tight sets")
    s.add_argument("game")
    s.add_argument("--vertices", action="store_true", help="Enumerate least-core vertices (small n)")
    s.add_argument("--probe", choices=["aggregate", "per-coalition"], default="aggregate")

    s = sub.add_parser("core", parents=[common], help="Core nonemptiness and membership")
    s.add_argument("game")
    s.add_argument("--check", default=None, help="Allocation x1,x2,... to test")

    for name, helptext in (("props", "Monotone/superadditive/convex/zero-monotone/veto players"),
                           ("shapley", "Shapley value"),
                           ("oracle", "Pre-nucleolus by sequential LPs only")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("game")

    s = sub.add_parser("balanced", parents=[common], help="Balancedness of a coalition collection")
    s.add_argument("n", type=int)
    s.add_argument("collection", help="Coalitions separated by ';', members by ',' (e.g. 1;2,3)")

    s = sub.add_parser("rgp-audit", parents=[common], help="Audit the reduced-game procedure")
    s.add_argument("game")
    s.add_argument("--supply", default=None, help="Allocation used to price removed players")

    s = sub.add_parser("surplus", parents=[common], help="Surplus matrix and coalition selection")
    s.add_argument("game")
    s.add_argument("--at", required=True, help="Allocation x1,x2,...")

    s = sub.add_parser("kohlberg", parents=[common], help="Kohlberg balancedness levels")
    s.add_argument("game")
    s.add_argument("--at", default=None, help="Allocation (default: the pre-nucleolus)")

    s = sub.add_parser("verify", parents=[common], help="Solver against LP oracle on random convex games")
    s.add_argument("--games", type=int, default=DEFAULT_VERIFY_GAMES)
    s.add_argument("--players", type=_players_list,
                   default=list(DEFAULT_VERIFY_PLAYERS), help="Player counts, e.g. 3,4,5")
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("catalog", parents=[common], help="Solve and check the bundled example games")
    s.add_argument("names", nargs="*", help="Games to include (default: example v1 ... v10)")
    s.add_argument("--write", dest="write_dir", default=None, metavar="DIR",
                   help="Also write each game as a .game file into DIR")

    s = sub.add_parser("config", parents=[common], help="Show or change persistent settings")
    s.add_argument("--set", dest="assignment", default=None, metavar="KEY=VALUE")
    return p


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="[%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _run_config(assignment: Optional[str], quiet: bool) -> int:
    if assignment is not None:
        key, sep, raw = assignment.partition("=")
        if not sep:
            print("ERROR: expected KEY=VALUE", file=sys.stderr)
            return EXIT_USAGE
        try:
            value = set_setting(key.strip(), raw.strip())
        except KeyError:
            print(f"ERROR: unknown setting {key.strip()!r}", file=sys.stderr)
            return EXIT_USAGE
        except ValueError as exc:
            print(f"ERROR: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if not quiet:
            print(f"{key.strip()} set to {value}")
        return 0
    for key, value in effective_settings().items():
        print(f"{key}: {value}")
    return 0


def _dispatch(args: argparse.Namespace, workers: int) -> int:
    out = {"output": args.output, "as_json": args.as_json, "quiet": args.quiet}
    cmd = args.command

    if cmd == "prekernel":
        return run_prekernel(args.game, args.start, args.trace, **out)
    if cmd == "prenucleolus":
        return run_prenucleolus(args.game, args.method, workers=workers, **out)
    if cmd == "oracle":
        return run_oracle(args.game, workers=workers, **out)
    if cmd == "stearns":
        return run_stearns(args.game, args.start, args.tol, args.max_steps, **out)
    if cmd == "leastcore":
        return run_leastcore(args.game, args.vertices, args.probe, workers=workers, **out)
    if cmd == "core":
        return run_core(args.game, args.check, **out)
    if cmd == "props":
        return run_props(args.game, **out)
    if cmd == "shapley":
        return run_shapley(args.game, **out)
    if cmd == "balanced":
        return run_balanced(args.n, args.collection, **out)
    if cmd == "rgp-audit":
        return run_rgp_audit(args.game, args.supply, **out)
    if cmd == "surplus":
        return run_surplus(args.game, args.at, **out)
    if cmd == "kohlberg":
        return run_kohlberg(args.game, args.at, **out)
    if cmd == "verify":
        if args.games < 1:
            print("ERROR: --games must be at least 1", file=sys.stderr)
            return EXIT_USAGE
        return run_verify(args.games, args.players, args.seed, args.output,
                          workers=workers, as_json=args.as_json, quiet=args.quiet)
    if cmd == "catalog":
        return run_catalog(args.names, args.write_dir, **out)
    if cmd == "config":
        return _run_config(args.assignment, args.quiet)
    raise AssertionError(f"unhandled command {cmd}")


def main(argv: Optional[List[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    _configure_logging(args.verbose)
    workers = args.workers if args.workers is not None else get_workers()
    if workers < 1:
        print("ERROR: --workers must be at least 1", file=sys.stderr)
        return EXIT_USAGE

    try:
        return _dispatch(args, workers)
    except KeyboardInterrupt:
        print("\nInterrupted by user.")
        return 130
    except VectorFormatError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TuGameError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_USAGE
