"""Classical online heuristics sharing the SS trace format."""
from __future__ import annotations

import enum
from typing import List, Tuple

from .core import (NEW_BIN, Instance, PackingState, PackTrace, PlacementRecord,
                   delta_ss, pack)


class PolicyId(str, enum.Enum):
    SS = "ss"
    FIRST_FIT = "firstfit"
    BEST_FIT = "bestfit"
    NEXT_FIT = "nextfit"

    @classmethod
    def parse(cls, name: str) -> "PolicyId":
        key = name.lower().replace("_", "").replace("-", "")
        for p in cls:
            if p.value == key:
                return p
        raise ValueError(f"unknown policy {name!r}; choose from "
                         + ", ".join(p.value for p in cls))


def _first_fit(levels: List[int], s: int, B: int, active: int) -> int:
    for b, lv in enumerate(levels):
        if lv + s <= B:
            return b
    return -1


def _best_fit(levels: List[int], s: int, B: int, active: int) -> int:
    best, best_level = -1, -1
    for b, lv in enumerate(levels):
        if lv + s <= B and lv > best_level:
            best, best_level = b, lv
    return best


def _next_fit(levels: List[int], s: int, B: int, active: int) -> int:
    if active >= 0 and levels[active] + s <= B:
        return active
    return -1


_CHOOSERS = {
    PolicyId.FIRST_FIT: _first_fit,
    PolicyId.BEST_FIT: _best_fit,
    PolicyId.NEXT_FIT: _next_fit,
}


def pack_with(policy, instance: Instance) -> Tuple[int, PackTrace]:
    policy = PolicyId.parse(policy) if isinstance(policy, str) else policy
    if policy is PolicyId.SS:
        return pack(instance)
    choose = _CHOOSERS[policy]
    B = instance.capacity
    state = PackingState(B)
    levels: List[int] = []
    records = []
    snapshots = {}
    active = -1
    for i, s in enumerate(instance.items):
        b = choose(levels, s, B, active)
        if b < 0:
            target = NEW_BIN
            snapshots[i] = state.open_counts()
            b = len(levels)
            levels.append(0)
        else:
            target = levels[b]
        d = delta_ss(state, s, target)
        state.place(s, target)
        levels[b] += s
        active = b
        records.append(PlacementRecord(i, s, target, d, target == NEW_BIN, b))
    return state.bins_used, PackTrace(policy.value, B, records, snapshots, state)
