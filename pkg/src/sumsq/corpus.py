"""The fixed verification corpus: seeded random runs plus structured families.

Everything is a pure function of the constants below, so the same corpus is
rebuilt on every machine.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator, List, Tuple

from .core import Instance
from .generators import DistributionSpec, SplitMix64, generate

CAPACITIES = (4, 10, 25, 100, 1000)
MASTER_SEED = 0x5EED_2525
RANDOM_RUNS = 10_000
HUGE_RUNS = 40        # n = 10**4
LONG_RUNS = 500       # n in [1000, 3000]
SHORT_MAX = 300


def _explicit(rng: SplitMix64, B: int, sizes: List[int]) -> dict:
    weights = {}
    for s in sizes:
        weights[s] = weights.get(s, 0) + rng.between(1, 5)
    total = sum(weights.values())
    return {s: Fraction(w, total) for s, w in weights.items()}


def random_spec(k: int) -> Tuple[str, DistributionSpec]:
    """The k-th random corpus entry: capacity, distribution family and length."""
    rng = SplitMix64(MASTER_SEED ^ (k * 0x9E3779B97F4A7C15))
    B = CAPACITIES[rng.below(len(CAPACITIES))]
    if k < HUGE_RUNS:
        n = 10 ** 4
    elif k < HUGE_RUNS + LONG_RUNS:
        n = rng.between(1000, 3000)
    else:
        n = rng.between(1, SHORT_MAX)
    seed = rng.next_u64()
    family = ("uniform", "skewed", "mixed", "constant")[rng.below(4)]
    if family == "uniform":
        hi = B if rng.below(2) else max(1, B // 2)
        spec = DistributionSpec.uniform_range(1, hi, B, n, seed)
    elif family == "skewed":
        # weight B - s + 1 on size s: small items dominate
        total = B * (B + 1) // 2
        w = {s: Fraction(B - s + 1, total) for s in range(1, B + 1)}
        spec = DistributionSpec.explicit(w, B, n, seed)
    elif family == "mixed":
        small_cap = max(1, (2 * B) // 25)
        mid_cap = max(1, (9 * B - 1) // 25)
        sizes = [rng.between(1, B) for _ in range(rng.between(1, 4))]
        if rng.below(10) < 7:
            sizes.append(rng.between(1, small_cap))
        if rng.below(10) < 7:
            sizes.append(rng.between(min(small_cap + 1, B), max(small_cap + 1, mid_cap)))
        spec = DistributionSpec.explicit(_explicit(rng, B, sizes), B, n, seed)
    else:
        spec = DistributionSpec.constant(rng.between(1, B), B, n, seed)
    return f"rand{k:05d}-{family}-B{B}", spec


# levels 2..24 (even only) in B=25 with strictly steep counts; an item of size 2
# and then one of size 8 both open bins, leaving level-2 bins mated to level-24
# bins at the moment the size-8 item arrives
STAIRCASE = {2: 1, 4: 2, 6: 3, 8: 4, 10: 6, 12: 7, 14: 8, 16: 9,
             18: 10, 20: 11, 22: 12, 24: 13}


def staircase(copies: int, tail: Tuple[int, ...] = ()) -> Instance:
    """Hand-built B=25 instance whose Case-3 classes carry honorary members."""
    items: List[int] = []
    for level in sorted(STAIRCASE, reverse=True):
        items += [level] * (STAIRCASE[level] * copies)
    return Instance(25, items + [2, 8] + list(tail))


def structured_instances() -> Iterator[Tuple[str, Instance]]:
    yield "hand-empty", Instance(10, [])
    yield "hand-2-2", Instance(4, [2, 2])
    yield "hand-5x4", Instance(10, [5, 5, 5, 5])
    yield "hand-3333-7", Instance(10, [3, 3, 3, 3, 7])
    yield "hand-777", Instance(10, [7, 7, 7])
    yield "hand-full", Instance(10, [10, 10, 1, 9])
    yield "hand-B1", Instance(1, [1, 1, 1])
    for c in range(1, 11):
        yield f"staircase-{c}", staircase(c)
    rng = SplitMix64(MASTER_SEED + 1)
    for c in range(1, 21):
        # large tail items cannot open bins below delta*B, so x stays put;
        # size-1 tails may close or shift the mates
        tail = tuple(rng.between(9, 25) if rng.below(2) else 1
                     for _ in range(rng.between(1, 60)))
        yield f"staircase-tail-{c}", staircase(1 + rng.below(4), tail)


def corpus(random_runs: int = RANDOM_RUNS) -> Iterator[Tuple[str, Instance]]:
    yield from structured_instances()
    for k in range(random_runs):
        name, spec = random_spec(k)
        yield name, generate(spec)


def small_exact_corpus() -> List[Tuple[str, Instance]]:
    """Instances with n <= 8 and B <= 12 for the exhaustive OPT cross-check."""
    out = []
    rng = SplitMix64(MASTER_SEED + 2)
    for B in range(2, 13):
        for n in range(1, 9):
            for rep in range(6):
                lo = 1 if rep < 4 else max(1, B // 3)
                items = [rng.between(lo, B) for _ in range(n)]
                out.append((f"small-B{B}-n{n}-r{rep}", Instance(B, items)))
    return out
