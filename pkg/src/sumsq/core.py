"""Sum-of-Squares packing state and placement rule.

The packing is tracked by level counts only: ``counts[h]`` is the number of
open bins whose contents total ``h`` (``1 <= h <= B - 1``).  The SS objective is
``ss(P) = sum(counts[h] ** 2)`` and each item goes wherever that sum ends up
smallest.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

NEW_BIN = 0
"""Placement target meaning "open a fresh bin" (an empty bin has level 0)."""


class InfeasiblePlacement(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    capacity: int
    items: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(int(s) for s in self.items))
        if self.capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {self.capacity}")
        for i, s in enumerate(self.items):
            if not 1 <= s <= self.capacity:
                raise ValueError(
                    f"item {i} has size {s}, outside [1, {self.capacity}]")

    @property
    def total_size(self) -> int:
        return sum(self.items)

    def __len__(self):
        return len(self.items)


@dataclass
class PackingState:
    capacity: int
    counts: List[int] = field(default=None)
    closed_bins: int = 0
    bins_used: int = 0
    packed_size: int = 0

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {self.capacity}")
        if self.counts is None:
            self.counts = [0] * self.capacity
        elif len(self.counts) != self.capacity:
            raise ValueError("counts must have length capacity (index 0 unused)")
        self._occupied = {h for h in range(1, self.capacity) if self.counts[h]}

    @classmethod
    def from_counts(cls, capacity: int, open_counts: Dict[int, int],
                    closed_bins: int = 0) -> "PackingState":
        counts = [0] * capacity
        for h, c in open_counts.items():
            if not 1 <= h < capacity:
                raise ValueError(f"open level {h} outside [1, {capacity - 1}]")
            if c < 0:
                raise ValueError(f"negative count at level {h}")
            counts[h] = c
        return cls(capacity, counts, closed_bins,
                   closed_bins + sum(counts),
                   capacity * closed_bins + sum(h * c for h, c in enumerate(counts)))

    def copy(self) -> "PackingState":
        return PackingState(self.capacity, list(self.counts), self.closed_bins,
                            self.bins_used, self.packed_size)

    def open_counts(self) -> Tuple[Tuple[int, int], ...]:
        """Sparse ``(level, count)`` pairs for non-empty levels, ascending."""
        return tuple((h, self.counts[h]) for h in sorted(self._occupied))

    def occupied_levels(self):
        return self._occupied

    def check_invariants(self):
        c = self.counts
        assert c[0] == 0
        assert all(v >= 0 for v in c)
        assert self.bins_used == self.closed_bins + sum(c)
        assert self.packed_size == self.capacity * self.closed_bins + sum(
            h * v for h, v in enumerate(c))
        assert self._occupied == {h for h in range(1, self.capacity) if c[h]}

    def place(self, size: int, target: int):
        """Put an item of ``size`` at ``target`` in place (no scoring)."""
        B = self.capacity
        c = self.counts
        if not 1 <= size <= B:
            raise InfeasiblePlacement(f"size {size} outside [1, {B}]")
        if target != NEW_BIN:
            if not 1 <= target < B or c[target] == 0:
                raise InfeasiblePlacement(f"no open bin at level {target}")
            if target + size > B:
                raise InfeasiblePlacement(
                    f"size {size} does not fit at level {target} (B={B})")
            c[target] -= 1
            if not c[target]:
                self._occupied.discard(target)
        else:
            self.bins_used += 1
        new_level = target + size
        if new_level == B:
            self.closed_bins += 1
        else:
            if not c[new_level]:
                self._occupied.add(new_level)
            c[new_level] += 1
        self.packed_size += size


@dataclass(frozen=True)
class PlacementDecision:
    target: int
    delta_ss: int

    @property
    def is_new_bin(self) -> bool:
        return self.target == NEW_BIN


@dataclass(frozen=True)
class PlacementRecord:
    index: int
    size: int
    target: int
    delta_ss: int
    new_bin: bool
    bin_id: int


@dataclass
class PackTrace:
    """Everything a checker needs to replay and audit one packing run.

    ``snapshots`` maps the index of each item that opened a bin to the sparse
    level counts just before that item was placed.
    """
    policy: str
    capacity: int
    records: List[PlacementRecord]
    snapshots: Dict[int, Tuple[Tuple[int, int], ...]]
    final: PackingState

    @property
    def items(self) -> Tuple[int, ...]:
        return tuple(r.size for r in self.records)

    def new_bin_events(self) -> List[PlacementRecord]:
        return [r for r in self.records if r.new_bin]

    def replay_levels(self, stop: Optional[int] = None) -> List[int]:
        """Per-bin levels after the first ``stop`` records (all when None)."""
        levels: List[int] = []
        for r in self.records[:stop]:
            if r.new_bin:
                if r.bin_id != len(levels):
                    raise ValueError(f"record {r.index}: bins must open in id order")
                levels.append(0)
            levels[r.bin_id] += r.size
        return levels


def ss_value(state: PackingState) -> int:
    c = state.counts
    return sum(c[h] * c[h] for h in state.occupied_levels())


def delta_ss(state: PackingState, size: int, target: int) -> int:
    """Change in ss(P) if an item of ``size`` were placed at ``target``."""
    B = state.capacity
    c = state.counts
    if not 1 <= size <= B:
        raise InfeasiblePlacement(f"size {size} outside [1, {B}]")
    if target == NEW_BIN:
        return 2 * c[size] + 1 if size < B else 0
    if not 1 <= target < B or c[target] == 0:
        raise InfeasiblePlacement(f"no open bin at level {target}")
    top = target + size
    if top > B:
        raise InfeasiblePlacement(
            f"size {size} does not fit at level {target} (B={B})")
    d = 1 - 2 * c[target]
    if top < B:
        d += 2 * c[top] + 1
    return d


def choose_placement(state: PackingState, size: int) -> PlacementDecision:
    """SS rule: the feasible placement with the smallest ss increase.

    Ties prefer an existing bin over a new one and, among existing bins, the
    highest level.
    """
    B = state.capacity
    c = state.counts
    if not 1 <= size <= B:
        raise InfeasiblePlacement(f"size {size} outside [1, {B}]")
    best_h = NEW_BIN
    best = 2 * c[size] + 1 if size < B else 0
    limit = B - size
    for h in state.occupied_levels():
        if h > limit:
            continue
        top = h + size
        d = 1 - 2 * c[h] + (2 * c[top] + 1 if top < B else 0)
        if d < best or (d == best and h > best_h):
            best, best_h = d, h
    return PlacementDecision(best_h, best)


def apply_placement(state: PackingState, size: int,
                    decision: PlacementDecision) -> PackingState:
    """Return a new state with the decision applied."""
    out = state.copy()
    out.place(size, decision.target)
    return out


def pack(instance: Instance) -> Tuple[int, PackTrace]:
    """Run SS over ``instance.items`` in order."""
    B = instance.capacity
    state = PackingState(B)
    bins_at: Dict[int, List[int]] = {}
    records: List[PlacementRecord] = []
    snapshots = {}
    for i, s in enumerate(instance.items):
        decision = choose_placement(state, s)
        h = decision.target
        if h == NEW_BIN:
            snapshots[i] = state.open_counts()
            bin_id = state.bins_used
        else:
            stack = bins_at[h]
            bin_id = stack.pop()
            if not stack:
                del bins_at[h]
        state.place(s, h)
        if h + s < B:
            bins_at.setdefault(h + s, []).append(bin_id)
        records.append(PlacementRecord(i, s, h, decision.delta_ss,
                                       h == NEW_BIN, bin_id))
    return state.bins_used, PackTrace("ss", B, records, snapshots, state)
