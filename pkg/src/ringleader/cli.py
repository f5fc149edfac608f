"""Command-line front end.

Subcommands: sweep, closure, eliminate, orient, lottery, check, dump, load.
Exit code 0 means zero invariant violations and (for suites) full
convergence; anything else exits 1.
"""
from __future__ import annotations

import argparse
import sys

from . import analysis, harness, lottery
from .core.params import make_params
from .core.state import random_configuration
from .harness import ConfigFormatError, ExperimentSpec, Protocol
from .orientation import generate_two_hop_coloring, run_orientation


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _cmd_sweep(args) -> int:
    spec = ExperimentSpec(
        protocol=Protocol(args.protocol),
        n_values=tuple(_int_list(args.n)),
        trials_per_n=args.trials,
        base_seed=args.seed,
        max_steps_multiplier=args.multiplier,
        kappa_max_override=args.kappa_max,
        instrument=frozenset(args.instrument.split(",")) if args.instrument else frozenset(),
        workers=args.workers,
    )
    records = harness.run_convergence_sweep(spec)
    if args.out:
        harness.export_csv(records, args.out)
        print(f"wrote {len(records)} records to {args.out}")
    converged = sum(r.converged for r in records)
    violations = sum(r.violations for r in records)
    print(f"converged {converged}/{len(records)}, violations {violations}")
    return 0 if (converged == len(records) and violations == 0) else 1


def _cmd_closure(args) -> int:
    report = harness.run_closure_suite(
        Protocol(args.protocol),
        n=args.n,
        trials=args.trials,
        seed=args.seed,
        steps=args.steps,
        workers=args.workers,
    )
    for line in report.violations:
        print(f"VIOLATION {line}")
    if report.rejected_trials:
        print(f"rejected by precheck: {report.rejected_trials}")
    print(
        f"closure {report.protocol} n={report.n}: {report.trials} trials x "
        f"{report.steps_per_trial} steps, {len(report.violations)} violations"
    )
    return 0 if report.passed else 1


def _cmd_eliminate(args) -> int:
    ok = True
    for leaders in _int_list(args.leaders):
        report = harness.run_elimination_suite(
            n=args.n,
            initial_leaders=leaders,
            trials=args.trials,
            seed=args.seed,
            workers=args.workers,
        )
        status = "ok" if report.passed else "FAILED"
        print(
            f"eliminate n={args.n} leaders={leaders}: "
            f"{sum(report.converged)}/{report.trials} converged, "
            f"median {report.median_steps:.0f} steps, "
            f"zero-leader events {report.zero_leader_events} [{status}]"
        )
        ok = ok and report.passed
    return 0 if ok else 1


def _cmd_orient(args) -> int:
    print("seed,steps_to_oriented,max_segment_count_violation")
    ok = True
    rows = []
    for t in range(args.seeds):
        seed = harness.trial_seed(args.seed, args.n, t)
        coloring = generate_two_hop_coloring(args.n, seed)
        trial = run_orientation(coloring, seed + 1, args.max_steps)
        ok = ok and trial.converged and trial.monotone_violations == 0
        rows.append(
            f"{seed},{'' if trial.steps_to_oriented is None else trial.steps_to_oriented},"
            f"{trial.monotone_violations}"
        )
    print("\n".join(rows))
    return 0 if ok else 1


def _cmd_lottery(args) -> int:
    which = lottery.Bound(args.bound)
    rate = lottery.estimate_bound(args.k, args.c, which, args.trials, args.seed)
    ceiling = lottery.bound_probability(args.k, args.c)
    print(
        f"lottery k={args.k} c={args.c} bound={args.bound}: "
        f"empirical failure rate {rate:.5f}, stated ceiling {ceiling:.5f}"
    )
    return 0 if rate <= ceiling + 0.03 else 1


_PREDICATES = {
    "perfect": analysis.is_perfect,
    "c-pb": analysis.in_C_PB,
    "c-dl": analysis.in_C_DL,
    "s-pl": analysis.in_S_PL,
}


def _cmd_check(args) -> int:
    try:
        config = harness.load_config(args.snapshot)
    except ConfigFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.predicate == "leader-count":
        print(analysis.leader_count(config))
        return 0
    result = _PREDICATES[args.predicate](config)
    print("true" if result else "false")
    return 0 if result else 1


def _cmd_dump(args) -> int:
    params = make_params(args.n, args.kappa_max)
    if args.kind == "random":
        config = random_configuration(params, args.seed)
    else:
        config = analysis.construct_S_PL(params, args.seed)
    harness.dump_config(config, args.out)
    print(f"wrote {args.kind} configuration (n={args.n}, seed={args.seed}) to {args.out}")
    return 0


def _cmd_load(args) -> int:
    try:
        config = harness.load_config(args.snapshot)
    except ConfigFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    p = config.params
    print(
        f"valid snapshot: n={p.n} psi={p.psi} kappa_max={p.kappa_max} "
        f"leaders={analysis.leader_count(config)}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="ringleader", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="convergence sweep from random configurations")
    p.add_argument("--protocol", choices=["ppl", "por"], default="ppl")
    p.add_argument("--n", default="8,16,32,64", help="comma-separated ring sizes")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--multiplier", type=float, default=harness.DEFAULT_MULTIPLIER)
    p.add_argument("--kappa-max", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--instrument", default="", help="comma list, e.g. 'range'")
    p.add_argument("--out", default="results.csv")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("closure", help="safety preservation from safe starts")
    p.add_argument("--protocol", choices=["ppl", "por"], default="ppl")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=harness.CLOSURE_STEPS)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_closure)

    p = sub.add_parser("eliminate", help="leader elimination from multi-leader starts")
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--leaders", default="2,4,8", help="comma-separated counts")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_eliminate)

    p = sub.add_parser("orient", help="ring orientation trials, CSV to stdout")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--max-steps", type=int, default=10_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_orient)

    p = sub.add_parser("lottery", help="lottery-game bound estimation")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--bound", choices=["upper", "lower"], default="upper")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_lottery)

    p = sub.add_parser("check", help="evaluate a predicate on a snapshot")
    p.add_argument("predicate", choices=sorted(_PREDICATES) + ["leader-count"])
    p.add_argument("snapshot")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("dump", help="write a configuration snapshot")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=["random", "safe"], default="random")
    p.add_argument("--kappa-max", type=int, default=None)
    p.add_argument("--out", default="config.json")
    p.set_defaults(func=_cmd_dump)

    p = sub.add_parser("load", help="validate a configuration snapshot")
    p.add_argument("snapshot")
    p.set_defaults(func=_cmd_load)

    return top


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
