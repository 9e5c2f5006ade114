"""Checkers that audit SS traces against the structure of the 25/9 argument.

All thresholds (delta*B, alpha*B, B*(1 - alpha)) are compared as exact
fractions; nothing here touches floating point.

The proof anchors on two items: ``x``, the last item of size < delta*B that
opened a bin, and ``x'``, the last item of size <= alpha*B that opened a bin.
At the ``x'`` event every bin at a small level is paired with a unique "mate"
at a large level in the same residue class mod s'.  At the ``x`` event the
bins above ``Delta`` are split into classes ``D_h`` (levels h, h+s, ...), and
small bins whose mates sit in ``D_h`` join that class as honorary members.
Each class, honorary members included, must average at least delta*B.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .core import PackTrace
from .params import PAPER_PARAMS, ParamPair, check_params

F = Fraction
THEOREM_RATIO = F(25, 9)

Snapshot = Union[Mapping[int, int], Sequence[Tuple[int, int]]]


class NotSSTrace(ValueError):
    pass


class MateConflict(ValueError):
    pass


def _as_counts(snapshot: Snapshot) -> Dict[int, int]:
    if isinstance(snapshot, Mapping):
        return {h: c for h, c in snapshot.items() if c}
    return {h: c for h, c in snapshot if c}


def _require_ss(trace: PackTrace):
    if trace.policy != "ss":
        raise NotSSTrace(
            f"trace was produced by policy {trace.policy!r}; the count "
            "monotonicity lemma and the proof structure only apply to SS")


# ---------------------------------------------------------------- lemma

@dataclass(frozen=True)
class LemmaViolation:
    event: int  # index of the item that opened a bin
    size: int
    j: int
    n_j: int
    n_j_plus_s: int


def lemma_violations(snapshot: Snapshot, size: int, capacity: int) -> List[int]:
    """Levels j in [1, B-s-1] with n_j > n_{j+s}."""
    counts = _as_counts(snapshot)
    limit = capacity - size
    return sorted(j for j, c in counts.items()
                  if 1 <= j < limit and c > counts.get(j + size, 0))


def check_lemma_sequence(trace: PackTrace) -> List[LemmaViolation]:
    _require_ss(trace)
    out = []
    for r in trace.records:
        if not r.new_bin:
            continue
        snap = _as_counts(trace.snapshots[r.index])
        for j in lemma_violations(snap, r.size, trace.capacity):
            out.append(LemmaViolation(r.index, r.size, j, snap[j],
                                      snap.get(j + r.size, 0)))
    return out


# ---------------------------------------------------------------- bound

@dataclass(frozen=True)
class BoundCheck:
    passed: bool
    bin_count: int
    bound: Fraction  # (25/9) * s(L)/B + 2
    slack: Fraction  # bound - bin_count


def check_theorem_bound(bin_count: int, total_size: int, capacity: int) -> BoundCheck:
    if capacity <= 0:
        raise ValueError(f"capacity must be positive, got {capacity}")
    bound = THEOREM_RATIO * F(total_size, capacity) + 2
    return BoundCheck(bin_count < bound, bin_count, bound, bound - bin_count)


def average_fill_holds(bin_count: int, total_size: int, capacity: int,
                       delta: Fraction = PAPER_PARAMS.delta) -> bool:
    """s(L)/B > delta * (bins - 2)."""
    return F(total_size, capacity) > delta * (bin_count - 2)


# ---------------------------------------------------------------- mates

@dataclass(frozen=True)
class MateCheck:
    small_level: int
    partner_level: int
    n_small: int
    n_partner: int
    counts_ok: bool     # n_partner >= n_small
    average_ok: bool    # (small + partner)/2 >= delta*B and partner > delta*B
    reach_ok: Optional[bool] = None  # partner >= B(1 - alpha); only below Delta

    @property
    def passed(self) -> bool:
        return self.counts_ok and self.average_ok and self.reach_ok is not False


def _largest_steps(j: int, step: int, capacity: int) -> int:
    # largest c with j + c*step < B
    return (capacity - 1 - j) // step


def _pairs(s_prime: int, params: ParamPair, capacity: int):
    dB = params.delta * capacity
    for j in range(1, s_prime + 1):
        c_j = _largest_steps(j, s_prime, capacity)
        i = 0
        while j + i * s_prime < dB:
            yield j + i * s_prime, j + (c_j - i) * s_prime
            i += 1


def check_mate_pairing(snapshot: Snapshot, s_prime: int, params: ParamPair,
                       capacity: int, reach_upto: Optional[int] = None
                       ) -> List[MateCheck]:
    """Pair each small level j+i*s' with j+(c_j-i)*s' and check the pair.

    When ``reach_upto`` is given, pairs whose small level is at most that
    value must also have a partner level of at least B(1 - alpha).
    """
    if 2 * params.alpha > 1 - 2 * params.delta:
        raise ValueError(f"{params} violates 2*alpha <= 1 - 2*delta; "
                         "the pairing argument needs it")
    counts = _as_counts(snapshot)
    dB = params.delta * capacity
    reach = (1 - params.alpha) * capacity
    out = []
    for small, partner in _pairs(s_prime, params, capacity):
        ns, np_ = counts.get(small, 0), counts.get(partner, 0)
        avg_ok = F(small + partner, 2) >= dB and partner > dB
        reach_ok = None
        if reach_upto is not None and small <= reach_upto:
            reach_ok = partner >= reach
        out.append(MateCheck(small, partner, ns, np_, np_ >= ns, avg_ok, reach_ok))
    return out


def assign_mates(bin_levels: Sequence[int], s_prime: int, params: ParamPair,
                 capacity: int) -> Dict[int, int]:
    """Injective map small-level bin id -> mate bin id.

    Built greedily per residue class in increasing i; within each pair of
    levels, bins are matched in id order.  Small bins whose partner level is
    short of bins are left unmated (check_mate_pairing reports those).
    """
    by_level: Dict[int, List[int]] = {}
    for b, lv in enumerate(bin_levels):
        if 0 < lv < capacity:
            by_level.setdefault(lv, []).append(b)
    mates: Dict[int, int] = {}
    taken = set()
    for small, partner in _pairs(s_prime, params, capacity):
        smalls = by_level.get(small, [])
        larges = [b for b in by_level.get(partner, []) if b not in taken]
        for sb, lb in zip(smalls, larges):
            mates[sb] = lb
            taken.add(lb)
    return mates


# ---------------------------------------------------------------- classes

@dataclass(frozen=True)
class MatePair:
    """A mate relation, with both bins' levels as of the event being audited."""
    small_bin: int
    small_level: int
    mate_bin: int
    mate_level: int


@dataclass(frozen=True)
class CongruenceClassReport:
    h: int
    d_h: int
    members: Tuple[Tuple[int, int], ...]  # (level, count), count > 0
    honorary_count: int
    honorary_levels: Tuple[int, ...]
    average_level: Optional[Fraction]  # None for an empty class
    average_ok: bool
    d_h_ok: bool
    # the following are None unless the class has honorary members
    reach_ok: Optional[bool] = None      # h + d_h*s >= B(1 - alpha)
    d_h_at_least_2: Optional[bool] = None
    mates_on_top: Optional[bool] = None  # every mate sits at level h + d_h*s
    honorary_count_ok: Optional[bool] = None  # honorary <= n_{h + d_h*s}

    @property
    def passed(self) -> bool:
        flags = (self.reach_ok, self.d_h_at_least_2, self.mates_on_top,
                 self.honorary_count_ok)
        return self.average_ok and self.d_h_ok and all(f is not False for f in flags)


def class_range(delta_offset: Fraction, s: int) -> range:
    """The s consecutive integers just above Delta."""
    first = int(F(delta_offset).__floor__()) + 1
    return range(first, first + s)


def check_class_averages(snapshot: Snapshot, mates: Sequence[MatePair], s: int,
                         delta_offset, params: ParamPair, capacity: int
                         ) -> List[CongruenceClassReport]:
    B = capacity
    counts = _as_counts(snapshot)
    Delta = F(delta_offset)
    dB = params.delta * B
    reach = (1 - params.alpha) * B

    seen = set()
    for m in mates:
        for b in (m.small_bin, m.mate_bin):
            if b in seen:
                raise MateConflict(f"bin {b} appears in more than one mate pair")
            seen.add(b)

    # honorary members, keyed by the class of their mate
    first = class_range(Delta, s)[0]
    honorary: Dict[int, List[MatePair]] = {}
    for m in mates:
        if m.small_level <= Delta and Delta < m.mate_level < B:
            h = first + (m.mate_level - first) % s
            honorary.setdefault(h, []).append(m)

    reports = []
    for h in class_range(Delta, s):
        d_h = _largest_steps(h, s, B)
        levels = [h + i * s for i in range(d_h + 1)]
        members = tuple((lv, counts[lv]) for lv in levels if counts.get(lv))
        hon = honorary.get(h, [])
        total = sum(lv * c for lv, c in members) + sum(m.small_level for m in hon)
        size = sum(c for _, c in members) + len(hon)
        avg = F(total, size) if size else None
        kw = {}
        if hon:
            top = h + d_h * s
            kw = dict(
                reach_ok=top >= reach,
                d_h_at_least_2=d_h >= 2,
                mates_on_top=all(m.mate_level == top for m in hon),
                honorary_count_ok=len(hon) <= counts.get(top, 0),
            )
        reports.append(CongruenceClassReport(
            h, d_h, members, len(hon), tuple(sorted(m.small_level for m in hon)),
            avg, avg is None or avg >= dB, d_h >= 1, **kw))
    return reports


# ---------------------------------------------------------------- tracer

class Case(str, enum.Enum):
    CASE1 = "case1"
    CASE2 = "case2"
    CASE3 = "case3"


@dataclass
class ProofTraceReport:
    params: ParamPair
    capacity: int
    x: Optional[Tuple[int, int]] = None        # (item index, size)
    x_prime: Optional[Tuple[int, int]] = None
    delta_offset: Optional[Fraction] = None
    case_taken: Optional[Case] = None
    lemma_violations: List[LemmaViolation] = field(default_factory=list)
    mate_checks: List[MateCheck] = field(default_factory=list)
    mate_map_injective: Optional[bool] = None
    class_reports: List[CongruenceClassReport] = field(default_factory=list)
    closed_mates: int = 0
    bound_check: Optional[BoundCheck] = None
    average_fill_ok: Optional[bool] = None
    violations: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def locate_x_xprime(trace: PackTrace, params: ParamPair) -> ProofTraceReport:
    _require_ss(trace)
    B = trace.capacity
    dB, aB = params.delta * B, params.alpha * B
    rep = ProofTraceReport(params, B)
    for r in trace.records:
        if r.new_bin:
            if r.size < dB:
                rep.x = (r.index, r.size)
            if r.size <= aB:
                rep.x_prime = (r.index, r.size)
    if rep.x is None:
        rep.case_taken = Case.CASE1
    elif rep.x[1] <= aB:
        rep.case_taken = Case.CASE2
    else:
        rep.case_taken = Case.CASE3
    if rep.x_prime is not None:
        s_prime = rep.x_prime[1]
        rep.delta_offset = F((aB // s_prime) * s_prime)
    elif rep.x is not None:
        rep.delta_offset = aB
    return rep


def _replay_at(trace: PackTrace, wanted: Sequence[int], violations: List[str]):
    """Per-bin levels just before each wanted record index.

    Also cross-checks every stored snapshot against the replayed counts.
    """
    B = trace.capacity
    levels: List[int] = []
    counts: Dict[int, int] = {}
    captured = {}
    wanted = set(wanted)
    for r in trace.records:
        if r.index in wanted:
            captured[r.index] = list(levels)
        if r.new_bin:
            if _as_counts(trace.snapshots.get(r.index, ())) != counts:
                violations.append(f"snapshot at item {r.index} disagrees with replay")
            if r.bin_id != len(levels):
                raise ValueError(f"record {r.index}: bins must open in id order")
            levels.append(0)
        lv = levels[r.bin_id]
        if lv != r.target:
            violations.append(
                f"record {r.index}: target {r.target} but bin {r.bin_id} is at {lv}")
        if 0 < lv < B:
            counts[lv] = counts.get(lv, 0) - 1
            if counts[lv] <= 0:
                del counts[lv]
        lv += r.size
        if lv > B:
            violations.append(f"record {r.index}: bin {r.bin_id} overfilled")
        levels[r.bin_id] = lv
        if lv < B:
            counts[lv] = counts.get(lv, 0) + 1
    return captured, levels


def verify_full_trace(trace: PackTrace, params: ParamPair = PAPER_PARAMS
                      ) -> ProofTraceReport:
    """Run every applicable check on an SS trace and collect the outcome."""
    check_params(params)
    rep = locate_x_xprime(trace, params)
    B = trace.capacity
    dB, aB = params.delta * B, params.alpha * B
    bad = rep.violations

    rep.lemma_violations = check_lemma_sequence(trace)
    for v in rep.lemma_violations:
        bad.append(f"lemma: item {v.event} (size {v.size}) has "
                   f"n_{v.j}={v.n_j} > n_{v.j + v.size}={v.n_j_plus_s}")

    wanted = [e[0] for e in (rep.x, rep.x_prime) if e is not None]
    at, final_levels = _replay_at(trace, wanted, bad)

    if rep.case_taken is Case.CASE1:
        for r in trace.new_bin_events():
            if r.size < dB:
                bad.append(f"case1: bin opened by item {r.index} of size {r.size}")
    else:
        mates: Dict[int, int] = {}
        if rep.x_prime is not None:
            xi, s_prime = rep.x_prime
            snap = trace.snapshots[xi]
            reach_upto = rep.delta_offset if rep.case_taken is Case.CASE3 else None
            rep.mate_checks = check_mate_pairing(snap, s_prime, params, B, reach_upto)
            for m in rep.mate_checks:
                if not m.passed:
                    bad.append(f"mate pair {m.small_level}->{m.partner_level} failed "
                               f"(counts {m.n_small}/{m.n_partner})")
            levels_xp = at[xi]
            mates = assign_mates(levels_xp, s_prime, params, B)
            rep.mate_map_injective = len(set(mates.values())) == len(mates)
            if not rep.mate_map_injective:
                bad.append("mate map is not injective")
            unmated = [b for b, lv in enumerate(levels_xp)
                       if 0 < lv < dB and b not in mates]
            if unmated:
                bad.append(f"small bins without mates at x': {unmated[:10]}")

        if rep.case_taken is Case.CASE2:
            levels_xp = at[rep.x_prime[0]]
            if sum(levels_xp) < dB * len(levels_xp):
                bad.append("case2: average level below delta*B at x'")
        else:
            xi, s = rep.x
            snap = _as_counts(trace.snapshots[xi])
            levels_x = at[xi]
            Delta = rep.delta_offset
            if rep.x_prime is None:
                low = [h for h in snap if h <= aB]
                if low:
                    bad.append(f"case3: levels <= alpha*B occupied without x': {low}")
            pairs = []
            for sb, mb in sorted(mates.items()):
                if levels_x[sb] > Delta:
                    continue
                if levels_x[mb] >= B:
                    rep.closed_mates += 1
                    continue
                pairs.append(MatePair(sb, levels_x[sb], mb, levels_x[mb]))
            xp_bin = (trace.records[rep.x_prime[0]].bin_id
                      if rep.x_prime is not None else None)
            orphans = [b for b, lv in enumerate(levels_x)
                       if 0 < lv <= Delta and b not in mates and b != xp_bin]
            if orphans:
                bad.append(f"case3: bins at or below Delta outside every class: "
                           f"{orphans[:10]}")
            rep.class_reports = check_class_averages(snap, pairs, s, Delta, params, B)
            for c in rep.class_reports:
                if not c.passed:
                    bad.append(f"class D_{c.h} failed (average {c.average_level}, "
                               f"d_h {c.d_h}, honorary {c.honorary_count})")

    final = trace.final
    if len(final_levels) != final.bins_used:
        bad.append("final bin count disagrees with replay")
    total = sum(r.size for r in trace.records)
    rep.bound_check = check_theorem_bound(final.bins_used, total, B)
    if not rep.bound_check.passed:
        bad.append(f"theorem bound: {final.bins_used} bins >= {rep.bound_check.bound}")
    rep.average_fill_ok = average_fill_holds(final.bins_used, total, B, params.delta)
    if not rep.average_fill_ok:
        bad.append("average fill: s(L)/B <= delta*(SS(L) - 2)")
    return rep
