"""Command-line entry point.

Exit codes: 0 success, 1 verification failure or internal inconsistency,
2 usage error, 3 capacity/step-cap errors.  Results go to stdout, diagnostics
to stderr; identical flags produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import contraction, empirical, markov, measure
from .congruence import CongruenceClass, preimage_class
from .errors import CapacityError, ConsistencyError, TrajectoryCapError

WORKERS_ENV = "COLLATZMC_WORKERS"


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be a nonnegative integer, got {text}")
    return value


def _bool_flag(text: str) -> bool:
    lowered = text.lower()
    if lowered not in ("true", "false"):
        raise argparse.ArgumentTypeError(f"expected true or false, got {text}")
    return lowered == "true"


def _default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collatzmc",
        description=(
            "Exact residue-class analysis of the Collatz map: preimages mod 8^m, "
            "the invariant measure, class transition matrices, contraction factors, "
            "and empirical trajectory sweeps."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "preimage",
        help="members of the third-iterate preimage of B(j, 8^m), one level finer",
    )
    p.add_argument("--j", type=_nonnegative_int, required=True, help="target residue")
    p.add_argument("--m", type=_positive_int, default=1, help="target level (modulus 8^m)")

    p = sub.add_parser("matrix", help="exact class transition matrix at level m")
    p.add_argument("--m", type=_positive_int, default=1)
    p.add_argument("--format", choices=("triplets", "dense"), default="triplets")

    p = sub.add_parser("stationary", help="exact stationary distribution at level m")
    p.add_argument("--m", type=_positive_int, default=1)

    p = sub.add_parser("graph", help="DOT graph of the 8-state class chain")
    p.add_argument("--m", type=_positive_int, default=1)
    p.add_argument("--force", action="store_true", help="allow levels above 1")

    p = sub.add_parser("contraction", help="contraction factors, bounds, and log averages")
    p.add_argument("--n-min", type=_positive_int, default=3, dest="n_min")
    p.add_argument("--m", type=_positive_int, default=1)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("simulate", help="sweep all starts up to n_max and compare to theory")
    p.add_argument("--max", type=_positive_int, required=True, dest="n_max")
    p.add_argument("--m", type=_positive_int, default=1)
    p.add_argument("--include-start", type=_bool_flag, default=True, dest="include_start")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument(
        "--per-trajectory",
        action="store_true",
        dest="per_trajectory",
        help="also average per-orbit normalized histograms (reported in json)",
    )
    p.add_argument(
        "--workers",
        type=_positive_int,
        default=None,
        help=f"process count (default: ${WORKERS_ENV} or machine parallelism)",
    )

    p = sub.add_parser("verify", help="run exact verification checks; exit 1 on any FAIL")
    p.add_argument("--m", type=_positive_int, default=1)
    p.add_argument("--measure", action="store_true", help="measure preimage-invariance, per class")
    p.add_argument("--stochasticity", action="store_true", help="row sums of the matrix")
    p.add_argument("--stationarity", action="store_true", help="exact fixed vector + power iteration")
    p.add_argument("--chapman", action="store_true", help="k-step measure probabilities vs matrix powers")
    p.add_argument("--ergodicity", action="store_true", help="some matrix power strictly positive")
    p.add_argument("--all", action="store_true", dest="run_all")
    p.add_argument("--force", action="store_true", help="lift the level cap on the measure check")
    return parser


def _cmd_preimage(args, out) -> int:
    modulus = 8**args.m
    if args.j >= modulus:
        print(f"error: --j must be below 8^m = {modulus}", file=sys.stderr)
        return 2
    union = preimage_class(CongruenceClass(args.j, args.m))
    for member in union:
        print(member.label(), file=out)
    print(f"even_members={union.even_count()} odd_members={union.odd_count()}", file=out)
    return 0


def _cmd_matrix(args, out) -> int:
    matrix = markov.build_matrix(args.m)
    if args.format == "triplets":
        for i, row in enumerate(matrix.rows):
            for j, p in row:
                print(f"{i} {j} {p}", file=out)
    else:
        for row in matrix.dense():
            print(" ".join(str(p) for p in row), file=out)
    return 0


def _cmd_stationary(args, out) -> int:
    dist = markov.stationary_distribution(markov.build_matrix(args.m))
    for i, w in enumerate(dist.weights):
        print(f"{i} {w}", file=out)
    return 0


def _cmd_graph(args, out) -> int:
    matrix = markov.build_matrix(args.m)
    try:
        text = markov.emit_chain_graph(matrix, force=args.force)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out.write(text)
    return 0


def _cmd_contraction(args, out) -> int:
    report = contraction.build_report(n_min=args.n_min, level=args.m)
    if args.format == "json":
        payload = {
            "level": report.level,
            "n_min": report.n_min,
            "raw_factors": [str(f) for f in report.raw_factors],
            "raw_geometric_mean": str(report.raw_mean),
            "bound_factors": [str(c) for c in report.bound_factors],
            "bounded_geometric_mean": report.bound_mean,
            "alpha": report.alpha,
            "beta": report.beta,
        }
        print(json.dumps(payload, indent=2), file=out)
    else:
        print(f"level                   {report.level}", file=out)
        print(f"n_min                   {report.n_min}", file=out)
        print(f"raw_factors             {' '.join(str(f) for f in report.raw_factors)}", file=out)
        print(f"raw_geometric_mean      {report.raw_mean}", file=out)
        print(f"bound_factors           {' '.join(str(c) for c in report.bound_factors)}", file=out)
        print(f"bounded_geometric_mean  {report.bound_mean:.12g}", file=out)
        print(f"alpha                   {report.alpha:.12g}", file=out)
        print(f"beta                    {report.beta:.12g}", file=out)
    return 0


def _cmd_simulate(args, out) -> int:
    workers = args.workers if args.workers is not None else _default_workers()
    config = empirical.SweepConfig(
        n_max=args.n_max,
        level=args.m,
        include_start=args.include_start,
        per_trajectory=args.per_trajectory,
        workers=workers,
    )
    stats = empirical.sweep(config)
    table = empirical.compare_to_theory(stats)
    if args.format == "csv":
        out.write(empirical.to_csv(table))
    else:
        per_traj = (
            empirical.compare_to_theory(stats, use_per_trajectory=True)
            if args.per_trajectory
            else None
        )
        print(json.dumps(empirical.to_json_dict(table, per_traj), indent=2), file=out)
    return 0


def _cmd_verify(args, out) -> int:
    checks = {
        "measure": args.measure,
        "stochasticity": args.stochasticity,
        "stationarity": args.stationarity,
        "chapman": args.chapman,
        "ergodicity": args.ergodicity,
    }
    if args.run_all:
        checks = dict.fromkeys(checks, True)
    if not any(checks.values()):
        print("error: select at least one check (or --all)", file=sys.stderr)
        return 2
    failed = False

    if checks["measure"]:
        report = measure.check_invariance(args.m, allow_large=args.force)
        if not args.run_all:
            for row in report.rows:
                if row.ok:
                    print(f"PASS {row.target.label()}", file=out)
                else:
                    print(
                        f"FAIL {row.target.label()} preimage={row.preimage_measure} "
                        f"class={row.class_measure}",
                        file=out,
                    )
        status = "PASS" if report.passed else "FAIL"
        print(
            f"{status} measure-invariance m={args.m} "
            f"({len(report.rows) - len(report.failures)}/{len(report.rows)} classes exact)",
            file=out,
        )
        failed |= not report.passed

    matrix = None
    if checks["stochasticity"] or checks["stationarity"] or checks["ergodicity"]:
        matrix = markov.build_matrix(args.m)

    if checks["stochasticity"]:
        bad = [i for i, row in enumerate(matrix.rows) if sum(p for _, p in row) != 1]
        status = "PASS" if not bad else "FAIL"
        print(f"{status} stochasticity m={args.m} ({matrix.size} rows sum to 1)", file=out)
        failed |= bool(bad)

    if checks["stationarity"]:
        try:
            markov.stationary_distribution(matrix)
            print(f"PASS stationarity m={args.m} (exact fixed vector, power iteration agrees)", file=out)
        except ConsistencyError as exc:
            print(f"FAIL stationarity m={args.m} ({exc})", file=out)
            failed = True

    if checks["chapman"]:
        base = markov.build_matrix(1)
        ok = True
        for k in (2, 3):
            power = markov.matrix_power(base, k).dense()
            if markov.kstep_measure_matrix(k) != power:
                ok = False
        status = "PASS" if ok else "FAIL"
        print(f"{status} chapman-kolmogorov m=1 k=2,3 (measure k-step equals matrix power)", file=out)
        failed |= not ok

    if checks["ergodicity"]:
        result = markov.check_ergodicity(matrix)
        status = "PASS" if result.positive else "FAIL"
        print(f"{status} ergodicity m={args.m} ({result})", file=out)
        failed |= not result.positive

    return 1 if failed else 0


_HANDLERS = {
    "preimage": _cmd_preimage,
    "matrix": _cmd_matrix,
    "stationary": _cmd_stationary,
    "graph": _cmd_graph,
    "contraction": _cmd_contraction,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
}


def main(argv=None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = out if out is not None else sys.stdout
    try:
        return _HANDLERS[args.command](args, out)
    except (CapacityError, TrajectoryCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_entry() -> None:
    sys.exit(main())
