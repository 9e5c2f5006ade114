#!/usr/bin/env python3
"""Pack the fixed verification corpus with SS and audit every trace.

Writes one CSV row per run (bins, bound slack, proof case, violations) and
prints a summary. Exit status 1 if any run fails a check.

    python3 scripts/run_corpus.py --runs 10000 -j 4 -o corpus.csv
"""
import argparse
import csv
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from sumsq.analysis import verify_full_trace
from sumsq.core import pack
from sumsq.corpus import RANDOM_RUNS, corpus
from sumsq.formats import fmt_decimal

FIELDS = ["instance_id", "capacity", "length", "bins", "bound", "slack",
          "slack_decimal", "case", "honorary_classes", "violations"]


def audit(entry):
    name, inst = entry
    bins, trace = pack(inst)
    rep = verify_full_trace(trace)
    b = rep.bound_check
    case = rep.case_taken.value if rep.case_taken else ""
    honorary = sum(1 for c in rep.class_reports if c.honorary_count)
    return [name, inst.capacity, len(inst), bins, str(b.bound), str(b.slack),
            fmt_decimal(b.slack), case, honorary, len(rep.violations)]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=RANDOM_RUNS, help="random corpus entries")
    ap.add_argument("-j", "--jobs", type=int, default=1)
    ap.add_argument("-o", "--output", help="CSV path (default: no per-run output)")
    args = ap.parse_args(argv)

    t0 = time.perf_counter()
    entries = list(corpus(args.runs))
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(audit, entries, chunksize=64))
    else:
        rows = [audit(e) for e in entries]
    elapsed = time.perf_counter() - t0

    if args.output:
        with open(args.output, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(FIELDS)
            w.writerows(rows)

    failed = [r[0] for r in rows if r[-1]]
    worst = min(rows, key=lambda r: float(r[6]))
    cases = {}
    for r in rows:
        cases[r[7] or "none"] = cases.get(r[7] or "none", 0) + 1
    print(f"runs: {len(rows)} in {elapsed:.1f}s")
    print(f"cases: {', '.join(f'{k}={v}' for k, v in sorted(cases.items()))}")
    print(f"traces with honorary members: {sum(1 for r in rows if r[8])}")
    print(f"min bound slack: {worst[5]} ({worst[6]}) on {worst[0]}")
    print(f"failed runs: {len(failed)}")
    for name in failed[:20]:
        print(f"  {name}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
