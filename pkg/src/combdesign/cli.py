"""Command-line surface: verify / solve / tune / pipeline / catalog / oracle.

Exit codes: 0 success, 1 invalid or no solution, 2 usage or parse error,
3 timeout.
"""

from __future__ import annotations

import argparse
import sys

from . import catalog as cat
from .catalog import CatalogError, ProblemParams, register_builtin_types
from .grids import SolutionFormatError, load_grid, save_grid, transpose
from .solvers import (Budget, Hyperparams, SolverError, STRATEGIES,
                      STRATEGY_RANGES, dfs_backtrack, solve)
from .verify import ShapeError, verify

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_TIMEOUT = 3


def parse_budget(text: str) -> float:
    units = {"s": 1.0, "m": 60.0, "h": 3600.0}
    if text and text[-1] in units:
        return float(text[:-1]) * units[text[-1]]
    return float(text)


def _params(args) -> ProblemParams:
    return ProblemParams(args.type, tuple(int(v) for v in args.params))


def cmd_verify(args) -> int:
    try:
        params = _params(args)
        cat.validate_params(params)
        grid = load_grid(args.infile)
        if args.transpose:
            grid = transpose(grid)
        res = verify(params, grid)
    except (CatalogError, SolutionFormatError, ShapeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if res.valid:
        print(f"valid: {params.format()}")
        return EXIT_OK
    for v in res.violations:
        print(f"{v.constraint} {v.location} {v.detail}")
    return EXIT_INVALID


def cmd_solve(args) -> int:
    try:
        params = _params(args)
        cat.validate_params(params)
        seconds = parse_budget(args.budget)
        budget = Budget(seconds=seconds,
                        evaluations=args.max_evaluations)
        h = None
        if args.hyper:
            ranges = STRATEGY_RANGES[args.strategy]
            values = {}
            for item in args.hyper:
                key, _, val = item.partition("=")
                values[key] = float(val)
            h = Hyperparams(ranges, **values)
        result = solve(params, args.strategy, budget, h=h, seed=args.seed)
    except (CatalogError, SolverError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if result.status == "solved":
        out = args.out or f"{params.format().replace(' ', '_')}.txt"
        save_grid(out, result.solution,
                  header=f"{params.format()} seed={args.seed}")
        print(out)
        return EXIT_OK
    print(f"{result.status}: best cost {result.cost} after "
          f"{result.evaluations} evaluations / {result.wall:.2f}s",
          file=sys.stderr)
    if result.status == "timeout":
        return EXIT_TIMEOUT
    return EXIT_INVALID


def cmd_tune(args) -> int:
    from .tuner import LadderConfig, hypertune, strategy_runner
    try:
        params = _params(args)
        cat.validate_params(params)
        ranges = STRATEGY_RANGES[args.strategy]
        sizes = tuple(int(x) for x in args.sizes.split(","))
        limits = tuple(float(x) for x in args.limits.split(","))
        ladder = LadderConfig(sizes=sizes, limits=limits,
                              parallelism=args.parallelism)
        runner = strategy_runner(args.strategy, ranges, seed=args.seed)
        outcome = hypertune(runner, ranges, [params], ladder)
    except (CatalogError, SolverError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for line in outcome.ledger:
        print(line)
    print(f"best: {outcome.best}")
    print(f"score: {outcome.best_score}")
    return EXIT_OK if outcome.solved_any else EXIT_INVALID


def cmd_pipeline(args) -> int:
    from .harness import HarnessError, PipelineConfig, run_pipeline
    try:
        cfg = PipelineConfig.load(args.config)
        if args.client:
            cfg.client_kind = args.client
        report = run_pipeline(cfg)
    except (HarnessError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for name, detail in report.stages:
        print(f"{name}: {detail}")
    for inst, cand, path in report.dev_solved + report.open_solved:
        print(f"solved {inst} by {cand}: {path}")
    return EXIT_INVALID if report.empty else EXIT_OK


def cmd_catalog(args) -> int:
    try:
        if args.action == "types":
            for key in sorted(cat.all_types()):
                print(key)
            return EXIT_OK
        records = cat.builtin_instances(args.type) if args.type \
            else cat.all_instances()
    except CatalogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for rec in records:
        print(f"{rec.params.format()}  [{rec.status}]")
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import (OracleCapError, check_caps, enumerate_costas,
                         oracle_valid)
    try:
        params = _params(args)
        cat.validate_params(params)
        check_caps(params)
    except (CatalogError, OracleCapError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.enumerate:
        if params.type_key != "costas":
            print("error: --enumerate supports costas only", file=sys.stderr)
            return EXIT_USAGE
        fwd = enumerate_costas(params.values[0], order="ascending")
        rev = enumerate_costas(params.values[0], order="descending")
        if sorted(fwd) != sorted(rev):
            print("error: search orders disagree", file=sys.stderr)
            return EXIT_INVALID
        print(len(fwd))
        return EXIT_OK
    if not args.infile:
        print("error: oracle needs --in or --enumerate", file=sys.stderr)
        return EXIT_USAGE
    try:
        grid = load_grid(args.infile)
        if args.transpose:
            grid = transpose(grid)
        ok = oracle_valid(params, grid)
    except (SolutionFormatError, ShapeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print("valid" if ok else "invalid")
    return EXIT_OK if ok else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="combdesign")
    sub = top.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("verify", help="check a solution file")
    p.add_argument("type")
    p.add_argument("params", nargs="+")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--transpose", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="run a search strategy")
    p.add_argument("type")
    p.add_argument("params", nargs="+")
    p.add_argument("--strategy", required=True, choices=sorted(STRATEGIES))
    p.add_argument("--budget", default="5s")
    p.add_argument("--max-evaluations", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--hyper", nargs="*", default=[], metavar="k=v")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("tune", help="grid-ladder hyperparameter tuning")
    p.add_argument("type")
    p.add_argument("params", nargs="+")
    p.add_argument("--strategy", required=True, choices=sorted(STRATEGIES))
    p.add_argument("--sizes", default="1000,100,10")
    p.add_argument("--limits", default="0.5,5,50")
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("pipeline", help="candidate-program pipeline")
    p.add_argument("--config", required=True)
    p.add_argument("--client", choices=["mock", "live"], default=None)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("catalog", help="list problem types and instances")
    p.add_argument("action", choices=["list", "types"])
    p.add_argument("type", nargs="?", default=None)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("oracle", help="brute-force independent checks")
    p.add_argument("type")
    p.add_argument("params", nargs="+")
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--transpose", action="store_true")
    p.add_argument("--enumerate", action="store_true")
    p.set_defaults(func=cmd_oracle)
    return top


def main(argv=None) -> int:
    register_builtin_types()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
