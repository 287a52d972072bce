"""Command line entry point: ``hemas run | compare | table1``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .benchmarks import FUNCTION_NAMES
from .harness import (
    PRESETS,
    InvalidConfig,
    MixedInstances,
    compare_campaigns,
    load_campaign,
    load_config,
    preset,
    render_report,
    run_campaign,
    write_comparison,
)
from .stats import describe

EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def _cmd_run(args) -> int:
    if args.config:
        config = load_config(args.config)
    elif args.preset:
        if args.function is None or args.dim is None:
            raise InvalidConfig("--function/--dim", "required with --preset")
        config = preset(args.preset, args.function, args.dim)
    else:
        raise InvalidConfig("run", "give --config or --preset")
    # flags override file values
    if args.function and args.config:
        config.function = args.function
    if args.dim and args.config:
        config.dimension = args.dim
    if args.seed is not None:
        config.master_seed = args.seed
    if args.reps is not None:
        if args.reps < 1:
            raise InvalidConfig("--reps", "must be >= 1")
        config.repetitions = args.reps
    if args.out is not None:
        config.output_dir = args.out
    config.__post_init__()
    if config.output_dir is None:
        config.output_dir = f"runs/{config.label}_{config.function}_{config.dimension}"
    records = run_campaign(config, workers=args.workers)
    d = describe([r.final_best_fitness for r in records])
    print(
        f"{config.label} {config.function} {config.dimension}D x{len(records)}: "
        f"mean {d.mean:.6g} median {d.median:.6g} sd {d.sd:.6g} min {d.min:.6g} max {d.max:.6g}"
    )
    print(f"results in {config.output_dir}")
    return 0


def _cmd_compare(args) -> int:
    report = compare_campaigns([load_campaign(p) for p in args.dirs])
    print(render_report(report))
    if args.csv:
        write_comparison(args.csv, report)
    return 0


def _cmd_table1(args) -> int:
    dims = [int(x) for x in args.dims.split(",") if x]
    functions = [x.strip() for x in args.functions.split(",") if x.strip()]
    presets = [x.strip() for x in args.presets.split(",") if x.strip()]
    root = Path(args.out)
    for fn in functions:
        for dim in dims:
            dirs = []
            for name in presets:
                config = preset(name, fn, dim, repetitions=args.reps, master_seed=args.seed)
                config.output_dir = str(root / f"{fn}_{dim}" / name)
                run_campaign(config, workers=args.workers)
                dirs.append(config.output_dir)
            print(f"== {fn} {dim}")
            if len(dirs) >= 2:
                report = compare_campaigns([load_campaign(p) for p in dirs])
                print(render_report(report))
                write_comparison(root / f"{fn}_{dim}" / "comparison.csv", report)
            print(flush=True)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hemas", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--workers", type=int, default=None, help="parallel runs (default: $HEMAS_WORKERS or 1)")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one campaign")
    r.add_argument("--config", help="YAML experiment config")
    r.add_argument("--preset", choices=PRESETS)
    r.add_argument("--function", choices=FUNCTION_NAMES)
    r.add_argument("--dim", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--reps", type=int)
    r.add_argument("--out")
    r.set_defaults(func=_cmd_run)

    c = sub.add_parser("compare", help="Kruskal-Wallis + Dunn over finished campaigns")
    c.add_argument("dirs", nargs="+")
    c.add_argument("--csv", help="write pairwise results to this CSV file")
    c.set_defaults(func=_cmd_compare)

    t = sub.add_parser("table1", help="run all presets over functions x dimensions")
    t.add_argument("--dims", default="100,300,500,1000,2000")
    t.add_argument("--functions", default=",".join(FUNCTION_NAMES))
    t.add_argument("--presets", default=",".join(PRESETS))
    t.add_argument("--reps", type=int, default=30)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out", default="runs/table1")
    t.set_defaults(func=_cmd_table1)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (InvalidConfig, MixedInstances) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
