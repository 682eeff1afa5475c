"""Command-line interface.

Subcommands:
  mds        embed a CSV or IDX data set with one of the four algorithms
  plan       print partition statistics without running any MDS
  gof-sweep  find the smallest dimension reaching a G1 target
  study      run a simulation study from a JSON grid file

Exit codes: 0 success, 1 usage/parameter error, 2 data error,
3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .algorithms import AlgorithmParams, run_algorithm
from .dataio import (
    RunManifest,
    read_csv_matrix,
    read_idx_images,
    write_configuration,
    write_manifest,
)
from .errors import (
    DegenerateRankError,
    FormatError,
    InvalidInputError,
    JoinError,
    MetricError,
    NumericalError,
    ParamError,
    ShapeError,
    UsageError,
)
from .partition import fast_stats, plan_divide_conquer, plan_interpolation
from .simulation import ScenarioSpec, gof_sweep, run_study
from .rng import sub_seed

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of calling sys.exit(2)."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _add_algorithm_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--l", type=int, default=None, help="partition size")
    parser.add_argument("--c", type=int, default=None, help="connecting points (divide)")
    parser.add_argument("--s", type=int, default=None, help="sampling points (fast)")
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: auto); results do not depend on it")


def build_parser() -> _Parser:
    parser = _Parser(prog="scalemds", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    mds = sub.add_parser("mds", help="compute an MDS configuration")
    mds.add_argument("--algorithm", required=True,
                     choices=["classical", "divide", "interpolate", "fast"])
    mds.add_argument("--input", required=True, help="input data file")
    mds.add_argument("--input-format", choices=["csv", "idx"], default="csv")
    mds.add_argument("--r", type=int, required=True, help="target dimension")
    _add_algorithm_params(mds)
    mds.add_argument("--out-config", default=None, help="write configuration CSV here")
    mds.add_argument("--out-manifest", default=None, help="write run manifest JSON here")
    mds.set_defaults(func=_cmd_mds)

    plan = sub.add_parser("plan", help="dry-run partition statistics")
    plan.add_argument("--algorithm", required=True, choices=["divide", "interpolate", "fast"])
    plan.add_argument("--n", type=int, required=True, help="number of rows")
    _add_algorithm_params(plan)
    plan.set_defaults(func=_cmd_plan)

    sweep = sub.add_parser("gof-sweep", help="smallest dimension reaching a G1 target")
    sweep.add_argument("--algorithm", required=True,
                       choices=["classical", "divide", "interpolate", "fast"])
    sweep.add_argument("--input", required=True)
    sweep.add_argument("--input-format", choices=["csv", "idx"], default="csv")
    sweep.add_argument("--target", type=float, default=0.8, help="G1 target (default 0.8)")
    _add_algorithm_params(sweep)
    sweep.set_defaults(func=_cmd_sweep)

    study = sub.add_parser("study", help="run a simulation study from a grid file")
    study.add_argument("grid", help="JSON grid configuration file")
    study.add_argument("out_dir", help="output directory for cell and study CSVs")
    study.add_argument("--threads", type=int, default=None)
    study.set_defaults(func=_cmd_study)

    return parser


def _load_input(args) -> "np.ndarray":
    if args.input_format == "idx":
        return read_idx_images(args.input).to_data_matrix()
    return read_csv_matrix(args.input)


def _cmd_mds(args) -> int:
    data = _load_input(args)
    params = AlgorithmParams(r=args.r, l=args.l, c=args.c, s=args.s, seed=args.seed)
    started = time.perf_counter()
    config = run_algorithm(args.algorithm, data, params, threads=args.threads)
    elapsed = round(time.perf_counter() - started, 3)
    print(f"algorithm={args.algorithm} n={data.shape[0]} k={data.shape[1]} r={args.r}")
    print(f"G1={config.gof_g1:.6f} G2={config.gof_g2:.6f} elapsed_s={elapsed:.3f}")
    print("eigenvalue_estimates=" + ",".join(f"{v:.6g}" for v in config.eigenvalue_estimates))
    output_paths = {}
    if args.out_config:
        write_configuration(config, args.out_config)
        output_paths["configuration"] = args.out_config
        print(f"configuration written to {args.out_config}")
    if args.out_manifest:
        resolved = params.resolved(args.algorithm)
        manifest = RunManifest(
            algorithm=args.algorithm,
            params={"r": resolved.r, "l": resolved.l, "c": resolved.c,
                    "s": resolved.s, "seed": resolved.seed, "threads": args.threads},
            input_path=args.input,
            input_rows=int(data.shape[0]),
            input_cols=int(data.shape[1]),
            output_paths=output_paths,
            gof_g1=config.gof_g1,
            gof_g2=config.gof_g2,
            eigenvalue_estimates=[float(v) for v in config.eigenvalue_estimates],
            elapsed_s=elapsed,
        )
        write_manifest(manifest, args.out_manifest)
        print(f"manifest written to {args.out_manifest}")
    return EXIT_OK


def _cmd_plan(args) -> int:
    if args.algorithm == "fast":
        # defaults mirror AlgorithmParams resolution for a dry run
        l = args.l if args.l is not None else 1000
        s = args.s if args.s is not None else 20
        stats = fast_stats(args.n, l, s)
        print(f"algorithm=fast n={args.n} l={l} s={s}")
        print(f"leaf_count={stats.leaf_count}")
        print(f"mean_leaf_size={stats.mean_leaf_size:.2f}")
        print(f"depth={stats.depth}")
    elif args.algorithm == "divide":
        l = args.l if args.l is not None else 400
        c = args.c if args.c is not None else 20
        plan = plan_divide_conquer(args.n, l, c, args.seed)
        sizes = [len(sub) for sub in plan.subsets]
        print(f"algorithm=divide n={args.n} l={l} c={c} seed={args.seed}")
        print(f"p={plan.p}")
        print(f"subset_sizes min={min(sizes)} max={max(sizes)}")
        print(f"connecting_points={len(plan.connecting_indices)}")
    else:
        l = args.l if args.l is not None else 1000
        plan = plan_interpolation(args.n, l, args.seed)
        sizes = [len(sub) for sub in plan.subsets]
        print(f"algorithm=interpolate n={args.n} l={l} seed={args.seed}")
        print(f"p={plan.p}")
        print(f"subset_sizes min={min(sizes)} max={max(sizes)}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    data = _load_input(args)
    params = AlgorithmParams(r=1, l=args.l, c=args.c, s=args.s, seed=args.seed)
    h_star = gof_sweep(data, args.algorithm, params, args.target, threads=args.threads)
    print(f"h_star={h_star}")
    return EXIT_OK


def _cmd_study(args) -> int:
    with open(args.grid) as handle:
        grid = json.load(handle)
    master_seed = int(grid.get("master_seed", 0))
    replications = int(grid.get("replications", 1))
    algorithms = list(grid.get("algorithms", ["divide", "interpolate", "fast"]))
    scenarios = []
    for idx, cell in enumerate(grid["scenarios"]):
        scenarios.append(ScenarioSpec(
            n=int(cell["n"]), k=int(cell["k"]), h=int(cell["h"]),
            replications=int(cell.get("replications", replications)),
            seed=sub_seed(master_seed, idx),
        ))
    params = {}
    for name, values in grid.get("params", {}).items():
        params[name] = AlgorithmParams(
            r=1, l=values.get("l"), c=values.get("c"), s=values.get("s"),
        )
    study_path = run_study(scenarios, algorithms, args.out_dir,
                           params=params, threads=args.threads)
    with open(study_path) as handle:
        row_count = sum(1 for _ in handle) - 1
    print(f"study written to {study_path} ({row_count} data rows)")
    return EXIT_OK


def cli_main(argv) -> int:
    """Entry point returning a process exit code instead of raising."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except ParamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, InvalidInputError, ShapeError, JoinError,
            DegenerateRankError, MetricError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
