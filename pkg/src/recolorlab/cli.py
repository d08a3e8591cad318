"""Command-line front end.

Subcommands:

- run <config> --out <csv> [--seed N] [--parallel K] [--timing]
- verify <suite> [--budget N] [--seed N]
- fit <csv> --x {n|T}
- oracle ehrenfest --N <even>
"""

import argparse
import sys
from fractions import Fraction

from .harness import (
    fit_from_records,
    load_config,
    read_records_csv,
    run_experiment,
    summarize,
)
from .oracles import ehrenfest_conditioned_return, ehrenfest_return_time
from .verify import SUITES, run_suite


def _cmd_run(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config.master_seed = args.seed
    if args.timing:
        config.timing = True
    records = run_experiment(config, out_path=args.out, parallel=args.parallel)
    for s in summarize(records):
        print(
            f"{s.scenario} {s.algorithm} n={s.n} T={s.T}: "
            f"median={s.median_iterations:g} mean={s.mean_iterations:.1f} "
            f"censored={s.censored}/{s.runs}"
        )
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_verify(args) -> int:
    report = run_suite(args.suite, budget=args.budget, seed=args.seed)
    print(report.describe())
    if not report.passed and report.first_counterexample:
        print(f"first counterexample: {report.first_counterexample}")
    return 0 if report.passed else 1


def _cmd_fit(args) -> int:
    records = read_records_csv(args.csv)
    fits = fit_from_records(records, args.x)
    print("scenario,algorithm,exponent,r2,points")
    for (scenario, algorithm), fit in sorted(fits.items()):
        print(
            f"{scenario},{algorithm},{fit.exponent:.6f},{fit.r2:.6f},{len(fit.points)}"
        )
    return 0


def _cmd_oracle(args) -> int:
    n = args.N
    if n % 2 or n < 2:
        print("N must be even and >= 2", file=sys.stderr)
        return 2
    kac = ehrenfest_return_time(n, 1)
    expected = Fraction(2**n, n)
    conditioned = ehrenfest_conditioned_return(n)
    print(f"N={n}")
    print(f"return_time_state_1={kac} (2^N/N={expected})")
    print(f"conditioned_return_1_to_1_or_{n - 1}={conditioned} (~{float(conditioned):.4f})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recolorlab",
        description="dynamic graph recoloring experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a configured experiment to CSV")
    p_run.add_argument("config")
    p_run.add_argument("--out", required=True)
    p_run.add_argument("--seed", type=int, default=None, help="override master seed")
    p_run.add_argument("--parallel", type=int, default=1)
    p_run.add_argument(
        "--timing",
        action="store_true",
        help="record wall_ns (breaks byte-identical reproducibility)",
    )
    p_run.set_defaults(fn=_cmd_run)

    p_verify = sub.add_parser("verify", help="run an invariant suite")
    p_verify.add_argument("suite", choices=sorted(SUITES))
    p_verify.add_argument("--budget", type=int, default=None)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.set_defaults(fn=_cmd_verify)

    p_fit = sub.add_parser("fit", help="fit scaling exponents from a CSV")
    p_fit.add_argument("csv")
    p_fit.add_argument("--x", choices=["n", "T"], required=True)
    p_fit.set_defaults(fn=_cmd_fit)

    p_oracle = sub.add_parser("oracle", help="exact Markov-chain oracles")
    oracle_sub = p_oracle.add_subparsers(dest="oracle", required=True)
    p_ehr = oracle_sub.add_parser("ehrenfest", help="urn return times")
    p_ehr.add_argument("--N", type=int, required=True)
    p_ehr.set_defaults(fn=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
