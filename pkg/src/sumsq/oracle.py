"""Exact OPT(L) by branch and bound, with a certified fallback bound."""
from __future__ import annotations

import sys
from dataclasses import dataclass

from .core import Instance

DEFAULT_NODE_BUDGET = 10 ** 7


@dataclass(frozen=True)
class OptResult:
    value: int
    exact: bool
    nodes_explored: int
    upper_bound: int


class _BudgetExhausted(Exception):
    pass


def size_lower_bound(instance: Instance) -> int:
    return -(-instance.total_size // instance.capacity)


def _large_item_bound(items, B):
    # items above B/2 pairwise cannot share a bin
    return sum(1 for s in items if 2 * s > B)


def _first_fit_decreasing(items, B):
    levels = []
    for s in items:
        for b, lv in enumerate(levels):
            if lv + s <= B:
                levels[b] += s
                break
        else:
            levels.append(s)
    return len(levels)


def opt_exact(instance: Instance, node_budget: int = DEFAULT_NODE_BUDGET) -> OptResult:
    """Minimum bin count for ``instance``.

    Depth-first search over assignments of items (largest first) to bins.
    Bins are opened in index order and, for each item, only one bin per
    distinct current level is tried, so permutations of equivalent bins are
    never revisited.  A node is pruned when the open bins plus the overflow of
    the remaining size over the free space cannot beat the incumbent.

    If more than ``node_budget`` nodes would be needed, the result is the best
    proven lower bound with ``exact=False``.
    """
    if node_budget <= 0:
        raise ValueError(f"node_budget must be positive, got {node_budget}")
    B = instance.capacity
    items = sorted(instance.items, reverse=True)
    n = len(items)
    lb = max(size_lower_bound(instance), _large_item_bound(items, B))
    best = _first_fit_decreasing(items, B)
    if best == lb:
        return OptResult(lb, True, 0, best)

    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + items[i]
    levels = []
    nodes = 0

    def dfs(i, free):
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise _BudgetExhausted
        if i == n:
            best = len(levels)
            return
        overflow = suffix[i] - free
        need = len(levels) + (-(-overflow // B) if overflow > 0 else 0)
        if need >= best:
            return
        s = items[i]
        tried = set()
        for b in range(len(levels)):
            lv = levels[b]
            if lv + s <= B and lv not in tried:
                tried.add(lv)
                levels[b] = lv + s
                dfs(i + 1, free - s)
                levels[b] = lv
                if best == lb:
                    return
        if len(levels) + 1 < best:
            levels.append(s)
            dfs(i + 1, free + B - s)
            levels.pop()

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, n + 200))
    try:
        dfs(0, 0)
    except _BudgetExhausted:
        return OptResult(lb, False, node_budget, best)
    finally:
        sys.setrecursionlimit(old_limit)
    return OptResult(best, True, nodes, best)
