"""Command-line entry point.

Subcommands::

    uidim analyze FAMILY.json            exact dimensions and boundedness
    uidim compose EXPR.json [--verify]   rule-derived bound (+ soundness)
    uidim simulate {deterministic,random-set,quarterplane} ...
    uidim rademacher FAMILY.json (--exact | --mc N)

All randomness flows from ``--seed``; omitting it uses the fixed default
below, never entropy, so identical invocations are byte-identical. The
``--threads`` flag only partitions work and cannot change any result.

Exit codes: 0 success, 1 failed verification, 2 parse error, 3 precondition
violation, 4 infeasible exact computation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io as uio
from .dimension import ui_dimension_exact, vc_dimension_exact
from .errors import InfeasibleError, ParseError, ValidationError
from .family import min_boundedness
from .rademacher import rademacher_exact, rademacher_mc
from .rules import RuleTrace, eval_bound, verify_bound
from .sampling import (
    simulate_deterministic,
    simulate_quarterplane,
    simulate_random_set,
)

DEFAULT_SEED = 271828
EXIT_OK = 0
EXIT_UNSOUND = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_INFEASIBLE = 4


def _write_out(args: argparse.Namespace, payload: dict) -> None:
    if args.out:
        Path(args.out).write_text(uio.canonical_json(payload))


def cmd_analyze(args: argparse.Namespace) -> int:
    family = uio.load_family(args.family)
    bounded = min_boundedness(family)
    ui = ui_dimension_exact(family, args.max_ground)
    vc = vc_dimension_exact(family, args.max_ground)
    ground = family.ground
    report = {
        "ground_size": ground.m,
        "family_size": len(family.sets),
        "profile": [[j, c] for j, c in sorted(family.profile.items())],
        "min_d": bounded.min_d,
        "violating_j": bounded.violating_j,
        "ui_dim": ui.dim,
        "ui_witness": list(ground.elements_of(ui.witness)),
        "vc_dim": vc.dim,
        "vc_witness": list(ground.elements_of(vc.witness)),
    }
    print(f"ground size      {report['ground_size']}")
    print(f"family size      {report['family_size']}")
    print(f"min bounded d    {report['min_d']}")
    print(f"ui dimension     {report['ui_dim']}  witness {report['ui_witness']}")
    print(f"vc dimension     {report['vc_dim']}  witness {report['vc_witness']}")
    _write_out(args, report)
    return EXIT_OK


def _trace_dict(trace: RuleTrace) -> dict:
    out: dict = {"rule": trace.rule, "bound": trace.bound}
    if trace.note:
        out["note"] = trace.note
    if trace.children:
        out["children"] = [_trace_dict(c) for c in trace.children]
    return out


def _print_trace(trace: RuleTrace, indent: int = 0) -> None:
    note = f"  ({trace.note})" if trace.note else ""
    print(f"{'  ' * indent}{trace.rule}: {trace.bound}{note}")
    for child in trace.children:
        _print_trace(child, indent + 1)


def cmd_compose(args: argparse.Namespace) -> int:
    expr = uio.load_expr(args.expression)
    derivation = eval_bound(expr, args.max_ground)
    report = {
        "bound": derivation.bound,
        "dimension": derivation.dimension,
        "trace": _trace_dict(derivation.trace),
    }
    print(f"derived bound    {derivation.bound}")
    print(f"dimension        {derivation.dimension}")
    _print_trace(derivation.trace)
    status = EXIT_OK
    if args.verify:
        result = verify_bound(expr, args.max_ground, args.max_expansion)
        report.update({"exact": result.exact, "sound": result.sound})
        print(f"exact dimension  {result.exact}")
        print(f"sound            {result.sound}")
        if not result.sound:
            status = EXIT_UNSOUND
    _write_out(args, report)
    return status


def _emit_batch(args: argparse.Namespace, batch) -> int:
    summary = batch.summary()
    print(f"kind             {batch.kind}")
    print(f"trials           {summary['trials']}")
    print(f"failures         {summary['failures']}")
    print(f"empirical rate   {summary['empirical_rate']!r}")
    print(f"bound            {summary['theoretical_bound']!r}")
    if batch.approx_bound is not None:
        print(f"approx bound     {batch.approx_bound!r}")
    if args.out:
        uio.write_trials_csv(batch, f"{args.out}.csv")
        uio.write_summary_json(batch, f"{args.out}.json")
    return EXIT_OK


def cmd_simulate_deterministic(args: argparse.Namespace) -> int:
    batch = simulate_deterministic(
        t=args.t,
        p=args.p,
        r=args.r,
        trials=args.trials,
        master_seed=args.seed,
        threads=args.threads,
    )
    return _emit_batch(args, batch)


def cmd_simulate_random_set(args: argparse.Namespace) -> int:
    family = uio.load_family(args.family)
    batch = simulate_random_set(
        family,
        p=args.p,
        d=args.d,
        t_min=args.t_min,
        trials=args.trials,
        master_seed=args.seed,
        threads=args.threads,
    )
    return _emit_batch(args, batch)


def cmd_simulate_quarterplane(args: argparse.Namespace) -> int:
    batch = simulate_quarterplane(
        n=args.n,
        p=args.p,
        trials=args.trials,
        master_seed=args.seed,
        t_min=args.t_min,
        threads=args.threads,
    )
    return _emit_batch(args, batch)


def cmd_rademacher(args: argparse.Namespace) -> int:
    family = uio.load_family(args.family)
    if args.mc is not None:
        report = rademacher_mc(family, args.mc, args.seed, threads=args.threads)
    else:
        report = rademacher_exact(
            family, args.max_ground, include_slices=bool(args.slices)
        )
    print(f"method           {report.method}")
    print(f"value            {report.value!r}")
    print(f"massart bound    {report.massart!r}")
    if report.stderr is not None:
        print(f"stderr           {report.stderr!r}")
    if args.slices:
        if report.slices is None:
            raise ValidationError("--slices requires the exact method")
        uio.write_slices_csv(report.slices, args.slices)
    payload = {
        "m": report.m,
        "family_size": report.family_size,
        "value": report.value,
        "method": report.method,
        "massart": report.massart,
        "samples": report.samples,
        "seed": report.seed,
        "stderr": report.stderr,
    }
    _write_out(args, payload)
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser, threads: bool = True) -> None:
    parser.add_argument("--out", help="output path (or prefix for simulate)")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    if threads:
        parser.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uidim",
        description="dimension bounds and sampling-imbalance checks for set families",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="exact dimensions of a family file")
    analyze.add_argument("family")
    analyze.add_argument("--max-ground", type=int, default=20)
    _add_common(analyze, threads=False)
    analyze.set_defaults(func=cmd_analyze)

    compose = sub.add_parser("compose", help="rule-derived bound for an expression")
    compose.add_argument("expression")
    compose.add_argument("--verify", action="store_true")
    compose.add_argument("--max-ground", type=int, default=20)
    compose.add_argument("--max-expansion", type=int, default=10**6)
    _add_common(compose, threads=False)
    compose.set_defaults(func=cmd_compose)

    simulate = sub.add_parser("simulate", help="Monte Carlo tail-bound checks")
    kinds = simulate.add_subparsers(dest="kind", required=True)

    det = kinds.add_parser("deterministic", help="fixed-set imbalance tail")
    det.add_argument("--t", type=int, required=True)
    det.add_argument("--p", type=float, required=True)
    det.add_argument("--r", type=float, default=1.0)
    det.add_argument("--trials", type=int, required=True)
    _add_common(det)
    det.set_defaults(func=cmd_simulate_deterministic)

    rnd = kinds.add_parser("random-set", help="adversarial d-bounded support tail")
    rnd.add_argument("--family", required=True)
    rnd.add_argument("--p", type=float, required=True)
    rnd.add_argument("--d", type=int, required=True)
    rnd.add_argument("--t-min", type=int, required=True)
    rnd.add_argument("--trials", type=int, required=True)
    _add_common(rnd)
    rnd.set_defaults(func=cmd_simulate_random_set)

    qp = kinds.add_parser("quarterplane", help="unbounded-support demonstration")
    qp.add_argument("--n", type=int, required=True)
    qp.add_argument("--p", type=float, required=True)
    qp.add_argument("--trials", type=int, required=True)
    qp.add_argument("--t-min", type=int, default=2)
    _add_common(qp)
    qp.set_defaults(func=cmd_simulate_quarterplane)

    rad = sub.add_parser("rademacher", help="expected sign-correlation supremum")
    rad.add_argument("family")
    group = rad.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true", default=True)
    group.add_argument("--mc", type=int, metavar="SAMPLES")
    rad.add_argument("--slices", metavar="CSV", help="per-cardinality table (exact)")
    rad.add_argument("--max-ground", type=int, default=22)
    _add_common(rad)
    rad.set_defaults(func=cmd_rademacher)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
