"""``plan`` command line: enumerate, search and simulate scenario files."""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

from . import report as rpt
from .config import SchemaError, load_scenario
from .dessim import SimConfig, simulate
from .model import ValidationError, enumerate_paths
from .oracle import OracleError
from .search import EvaluationBudgetExceeded, NoAdmissiblePath, brute_force, code_search
from .throughput import baseline_throughput, is_admissible, path_throughput

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SCHEMA = 3
EXIT_ORACLE = 4
EXIT_NO_ADMISSIBLE = 5
EXIT_BUDGET = 6

log = logging.getLogger("codeplan")


def cmd_enumerate(args) -> dict:
    bundle = load_scenario(args.scenario, seed=args.seed)
    sc = bundle.scenario
    base = baseline_throughput(sc)
    paths = enumerate_paths(sc)
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        tps = list(pool.map(lambda p: path_throughput(sc, p), paths))
    rows = [(p, tp, is_admissible(tp, base.t_0)) for p, tp in zip(paths, tps)]
    return rpt.enumerate_report(sc, base, rows)


def cmd_search(args) -> dict:
    bundle = load_scenario(args.scenario, seed=args.seed)
    oracle = bundle.oracle
    try:
        if args.brute_force:
            result = brute_force(bundle.scenario, oracle, bundle.search)
        else:
            result = code_search(bundle.scenario, oracle, bundle.search)
    finally:
        close = getattr(oracle, "close", None)
        if close is not None:
            close()
    mode = "brute_force" if args.brute_force else "code"
    return rpt.search_report(bundle.scenario, result, mode)


def _parse_path(text: str):
    try:
        values = [int(v) for v in text.split(",")]
    except ValueError:
        raise ValidationError(f"--path expects four comma-separated integers, got {text!r}") from None
    return values


def cmd_simulate(args) -> dict:
    bundle = load_scenario(args.scenario, seed=args.seed)
    sc = bundle.scenario
    path = None
    if args.path:
        path = sc.path_from_vector(_parse_path(args.path))
    cfg = SimConfig(sc, path, args.n_batches + args.warmup, args.warmup)
    rep = simulate(cfg)
    if path is None:
        analytic = baseline_throughput(sc).th_0
    else:
        analytic = path_throughput(sc, path).th_total
    return rpt.simulate_report(sc, path, analytic, rep, cfg.n_batches, cfg.warmup_batches)


COMMANDS = {"enumerate": cmd_enumerate, "search": cmd_search, "simulate": cmd_simulate}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plan", description="Inference path planning for coordinated DNN services."
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--scenario", required=True, help="scenario JSON file")
    parser.add_argument("--out", required=True, help="output directory for report.json and CSV")
    parser.add_argument("--brute-force", action="store_true", help="search: evaluate every admissible path")
    parser.add_argument("--seed", type=int, default=None, help="seed for the synthetic oracle")
    parser.add_argument("--jobs", type=int, default=1, help="enumerate: worker threads")
    parser.add_argument("--path", default=None, help="simulate: path vector 'lout,hin,hout,lin'")
    parser.add_argument("--n-batches", type=int, default=1000, help="simulate: measured batches")
    parser.add_argument("--warmup", type=int, default=10, help="simulate: warm-up batches")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.n_batches < 1 or args.warmup < 0:
        print("plan: --n-batches must be >= 1 and --warmup >= 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = COMMANDS[args.command](args)
    except (SchemaError, ValidationError) as exc:
        print(f"plan: invalid input: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except OracleError as exc:
        print(f"plan: oracle error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except NoAdmissiblePath as exc:
        print(f"plan: {exc}", file=sys.stderr)
        return EXIT_NO_ADMISSIBLE
    except EvaluationBudgetExceeded as exc:
        print(f"plan: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    fname = rpt.write_report(report, args.out)
    log.info("wrote %s", fname)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
