"""``sumsq`` command line: pack, verify, experiment, params, generate, search.

Exit status: 0 on success or all checks passing, 1 when a verification check
fails, 2 on usage, parameter or file-format errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import formats
from .analysis import NotSSTrace, verify_full_trace
from .baselines import PolicyId, pack_with
from .core import Instance
from .experiment import ExperimentConfig, run_experiment, run_instance
from .generators import DistributionSpec, SearchConfig, adversarial_search, generate
from .params import (PAPER_PARAMS, PROOF_CONSTRAINTS, InfeasibleParams, ParamPair,
                     derived_facts, feasible, maximize_delta, parse_rational)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(text):
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _policy(text):
    try:
        return PolicyId.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _write_out(path: Optional[str], text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_pack(args) -> int:
    inst, _ = formats.read_instance(args.input)
    if args.sorted:
        inst = Instance(inst.capacity, sorted(inst.items, reverse=True))
    row = run_instance(args.id or args.input, inst, args.policy, with_opt=args.opt)
    formats.write_csv([row.cells()], sys.stdout)
    if args.trace:
        _, trace = pack_with(args.policy, inst)
        with open(args.trace, "w") as fh:
            formats.write_trace(trace, fh)
    return EXIT_OK if row.all_checks_pass else EXIT_FAIL


def cmd_verify(args) -> int:
    params = ParamPair(args.alpha, args.delta)
    ok, slacks = feasible(params)
    if not ok:
        bad = ", ".join(f"{n} (slack {s})" for n, s in slacks)
        raise UsageError(f"infeasible parameters {params}: {bad}")
    trace = formats.read_trace(args.trace)
    try:
        rep = verify_full_trace(trace, params)
    except NotSSTrace as e:
        raise UsageError(str(e))
    doc = formats.proof_report_dict(rep)
    if args.json:
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        for key in ("case", "x", "x_prime", "delta_offset", "lemma_violations",
                    "mate_pairs_checked", "mate_pairs_failed", "mate_map_injective",
                    "closed_mates", "bound", "average_fill_ok", "passed"):
            print(f"{key}: {json.dumps(doc[key], sort_keys=True)}")
        print(f"classes: {len(doc['classes'])} non-empty, "
              f"{sum(not c['passed'] for c in doc['classes'])} failed")
        for v in rep.violations:
            print(f"VIOLATION: {v}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_experiment(args) -> int:
    try:
        config = ExperimentConfig.load(args.config)
        config.validate()
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"{args.config}: invalid config: {e}")
    cells, ok = run_experiment(config, jobs=args.jobs)
    if args.output in (None, "-"):
        formats.write_csv(cells, sys.stdout)
    else:
        with open(args.output, "w") as fh:
            formats.write_csv(cells, fh)
    return EXIT_OK if ok else EXIT_FAIL


def _print_system():
    print("constraints over (alpha, delta):")
    for c in PROOF_CONSTRAINTS:
        print(f"  {c}")


def cmd_params(args) -> int:
    if args.action == "optimize":
        best = maximize_delta()
        print(f"delta = {best.delta}, alpha = {best.alpha}")
        if args.verbose:
            _print_system()
            _, slacks = feasible(best)
            for name, s in slacks:
                print(f"  slack {name}: {s}")
        return EXIT_OK
    if args.action == "show":
        _print_system()
        return EXIT_OK
    if args.alpha is None or args.delta is None:
        raise UsageError("params check needs ALPHA and DELTA")
    p = ParamPair(args.alpha, args.delta)
    ok, slacks = feasible(p)
    print(f"{p}: {'feasible' if ok else 'infeasible'}")
    for c, (name, s) in zip(PROOF_CONSTRAINTS, slacks):
        print(f"  {name:<12} slack {str(s):>8}  {'ok' if c.holds(p) else 'VIOLATED'}")
    if ok:
        for fact, holds in derived_facts(p):
            print(f"  implied {fact}: {'holds' if holds else 'FAILS'}")
    return EXIT_OK if ok else EXIT_FAIL


def _parse_weights(text: str):
    out = {}
    for part in text.split(","):
        size, _, w = part.partition(":")
        out[int(size)] = parse_rational(w)
    return out


def cmd_generate(args) -> int:
    common = dict(capacity=args.capacity, length=args.length, seed=args.seed)
    try:
        if args.kind == "uniform_range":
            spec = DistributionSpec.uniform_range(args.low, args.high, **common)
        elif args.kind == "constant":
            spec = DistributionSpec.constant(args.value, **common)
        else:
            spec = DistributionSpec.explicit(_parse_weights(args.weights or ""), **common)
        inst = generate(spec)
    except (TypeError, ValueError) as e:
        raise UsageError(f"bad distribution: {e}")
    if args.json:
        text = formats.format_instance_json(inst, {"spec": spec.to_dict()})
    else:
        text = formats.format_instance(inst)
    _write_out(args.output, text)
    return EXIT_OK


def cmd_search(args) -> int:
    cfg = SearchConfig(args.capacity, args.max_length, args.iterations, args.seed,
                       args.objective)
    try:
        res = adversarial_search(cfg)
    except ValueError as e:
        raise UsageError(str(e))
    meta = {"ratio": str(res.ratio), "objective": cfg.objective, "seed": cfg.seed,
            "iterations": cfg.iterations}
    _write_out(args.output, formats.format_instance_json(res.instance, meta))
    print(f"best ratio {res.ratio} ({formats.fmt_decimal(res.ratio)}) "
          f"over {len(res.instance)} items", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sumsq", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pack", help="pack an instance file and print a report row")
    p.add_argument("input")
    p.add_argument("--policy", type=_policy, default=PolicyId.SS)
    p.add_argument("--trace", help="write the line-delimited trace here")
    p.add_argument("--opt", action="store_true", help="also compute exact OPT")
    p.add_argument("--sorted", action="store_true",
                   help="sort items in decreasing order first (offline variant)")
    p.add_argument("--id", help="instance id for the report (default: path)")
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("verify", help="audit an SS trace against the proof structure")
    p.add_argument("trace")
    p.add_argument("--alpha", type=_rational, default=PAPER_PARAMS.alpha)
    p.add_argument("--delta", type=_rational, default=PAPER_PARAMS.delta)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="run a JSON experiment config to CSV")
    p.add_argument("config")
    p.add_argument("-o", "--output")
    p.add_argument("-j", "--jobs", type=int, default=1)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("params", help="query the (alpha, delta) constraint system")
    p.add_argument("action", choices=["check", "optimize", "show"])
    p.add_argument("alpha", nargs="?", type=_rational)
    p.add_argument("delta", nargs="?", type=_rational)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("generate", help="draw a seeded instance")
    p.add_argument("--kind", choices=["uniform_range", "explicit", "constant"],
                   default="uniform_range")
    p.add_argument("--capacity", "-B", type=int, required=True)
    p.add_argument("--length", "-n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--low", type=int, default=1)
    p.add_argument("--high", type=int)
    p.add_argument("--value", type=int)
    p.add_argument("--weights", help="e.g. 4:1/2,6:1/2")
    p.add_argument("--json", action="store_true", help="structured format with metadata")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("search", help="hill-climb for instances with a high SS ratio")
    p.add_argument("--capacity", "-B", type=int, required=True)
    p.add_argument("--max-length", type=int, default=8)
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--objective", choices=["lb", "opt"], default="lb")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_search)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) == "generate" and args.high is None:
        args.high = args.capacity
    try:
        return args.func(args)
    except (UsageError, InfeasibleParams, formats.FormatError) as e:
        print(f"sumsq: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"sumsq: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
