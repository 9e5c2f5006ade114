"""Running (instance, policy) pairs and whole experiment configs."""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .analysis import check_theorem_bound, verify_full_trace
from .baselines import PolicyId, pack_with
from .core import Instance
from .formats import ReportRow, fmt_decimal, fmt_fraction
from .generators import DistributionSpec, generate
from .oracle import DEFAULT_NODE_BUDGET, opt_exact, size_lower_bound
from .params import PAPER_PARAMS, ParamPair


def run_instance(instance_id: str, instance: Instance, policy="ss",
                 with_opt: bool = False, params: ParamPair = PAPER_PARAMS,
                 node_budget: int = DEFAULT_NODE_BUDGET) -> ReportRow:
    policy = PolicyId.parse(policy) if isinstance(policy, str) else policy
    bins, trace = pack_with(policy, instance)
    total = instance.total_size
    B = instance.capacity
    lb = size_lower_bound(instance)
    opt = None
    ok = bins >= lb
    if with_opt:
        res = opt_exact(instance, node_budget)
        if res.exact:
            opt = res.value
            ok = ok and lb <= opt <= bins
    bound = check_theorem_bound(bins, total, B)
    if policy is PolicyId.SS:
        rep = verify_full_trace(trace, params)
        lemma, case, ok = len(rep.lemma_violations), rep.case_taken.value, ok and rep.passed
    else:
        lemma, case, ok = None, "n/a", ok and bound.passed
    return ReportRow(instance_id, policy.value, bins, total, B, lb, opt,
                     Fraction(bins, lb) if lb else None,
                     Fraction(bins, opt) if opt else None,
                     bound.slack, lemma, case, ok)


@dataclass
class ExperimentSpec:
    name: str
    distribution: dict
    capacity: int
    length: int
    seeds: List[int]
    policies: List[str] = field(default_factory=lambda: ["ss"])
    opt: bool = False

    def spec_for(self, seed: int) -> DistributionSpec:
        d = dict(self.distribution, capacity=self.capacity, length=self.length, seed=seed)
        return DistributionSpec.from_dict(d)


@dataclass
class ExperimentConfig:
    experiments: List[ExperimentSpec]
    opt_max_length: int = 12
    node_budget: int = DEFAULT_NODE_BUDGET

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        exps = []
        for e in doc["experiments"]:
            seeds = e.get("seeds", [0])
            if isinstance(seeds, dict):
                seeds = list(range(int(seeds.get("start", 0)),
                                   int(seeds.get("start", 0)) + int(seeds["count"])))
            exps.append(ExperimentSpec(
                str(e["name"]), dict(e["distribution"]), int(e["capacity"]),
                int(e["length"]), [int(s) for s in seeds],
                [str(p) for p in e.get("policies", ["ss"])], bool(e.get("opt", False))))
        return cls(exps, int(doc.get("opt_max_length", 12)),
                   int(doc.get("node_budget", DEFAULT_NODE_BUDGET)))

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def validate(self):
        """Reject unsatisfiable configs before anything runs."""
        names = set()
        if not self.experiments:
            raise ValueError("config lists no experiments")
        for e in self.experiments:
            if e.name in names:
                raise ValueError(f"duplicate experiment name {e.name!r}")
            names.add(e.name)
            if not e.seeds:
                raise ValueError(f"{e.name}: no seeds")
            for p in e.policies:
                PolicyId.parse(p)
            e.spec_for(e.seeds[0]).validate()
            if e.opt and e.length > self.opt_max_length:
                raise ValueError(f"{e.name}: opt requested for length {e.length} "
                                 f"> opt_max_length {self.opt_max_length}")
        if self.node_budget <= 0:
            raise ValueError("node_budget must be positive")

    def tasks(self):
        for k, e in enumerate(self.experiments):
            for seed in e.seeds:
                for p in e.policies:
                    yield (k, seed, PolicyId.parse(p).value), e, seed, p


def _run_task(args):
    key, e, seed, policy, node_budget = args
    inst = generate(e.spec_for(seed))
    return key, run_instance(f"{e.name}/s{seed}", inst, policy, e.opt,
                             node_budget=node_budget).cells()


def summary_cells(rows: Sequence[ReportRow]) -> List[str]:
    r_lb = [r.ratio_vs_lb for r in rows if r.ratio_vs_lb is not None]
    r_opt = [r.ratio_vs_opt for r in rows if r.ratio_vs_opt is not None]
    max_lb = max(r_lb, default=None)
    max_opt = max(r_opt, default=None)
    min_slack = min((r.bound_slack for r in rows if r.policy == "ss"), default=None)
    lemma = sum(r.lemma_violations or 0 for r in rows)
    return ["SUMMARY", "*", str(sum(r.bin_count for r in rows)),
            str(sum(r.total_size for r in rows)), "", "", "",
            fmt_fraction(max_lb), fmt_decimal(max_lb),
            fmt_fraction(max_opt), fmt_decimal(max_opt),
            fmt_fraction(min_slack), fmt_decimal(min_slack),
            str(lemma), "", "true" if all(r.all_checks_pass for r in rows) else "false"]


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> Tuple[List[List[str]], bool]:
    """All rows (sorted, summary last) plus whether every check passed."""
    config.validate()
    tasks = [(key, e, seed, p, config.node_budget) for key, e, seed, p in config.tasks()]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=8))
    else:
        results = [_run_task(t) for t in tasks]
    results.sort(key=lambda kr: kr[0])
    cells = [c for _, c in results]
    rows = [_row_from_cells(c) for c in cells]
    summary = summary_cells(rows)
    return cells + [summary], summary[-1] == "true"


def _row_from_cells(c: List[str]) -> ReportRow:
    def q(s):
        return Fraction(s) if s else None
    return ReportRow(c[0], c[1], int(c[2]), int(c[3]), int(c[4]), int(c[5]),
                     int(c[6]) if c[6] else None, q(c[7]), q(c[9]), Fraction(c[11]),
                     int(c[13]) if c[13] else None, c[14], c[15] == "true")
