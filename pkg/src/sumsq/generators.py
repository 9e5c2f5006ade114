"""Seeded instance generation and randomized search for bad SS instances.

Randomness comes from SplitMix64 (Steele, Lea and Flood), chosen because it is
a few lines in any language: state advances by 0x9E3779B97F4A7C15 and each
output is the state passed through a fixed xor-shift-multiply finalizer.
Integers below ``n`` are drawn by rejection: outputs at or above the largest
multiple of ``n`` not exceeding 2**64 are discarded, then ``x % n`` is used.
For ``n > 2**64`` the same rule runs on k consecutive outputs concatenated
big-endian into one 64k-bit integer, with k the fewest words covering ``n``.
Reproducing a corpus elsewhere only needs these two rules.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .core import Instance, pack
from .oracle import opt_exact, size_lower_bound
from .params import parse_rational

MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        words = max(1, -(-n.bit_length() // 64))
        span = 1 << (64 * words)
        limit = span - span % n
        while True:
            x = 0
            for _ in range(words):
                x = (x << 64) | self.next_u64()
            if x < limit:
                return x % n

    def between(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        return lo + self.below(hi - lo + 1)


KINDS = ("uniform_range", "explicit", "constant")


@dataclass(frozen=True)
class DistributionSpec:
    kind: str
    capacity: int
    length: int
    seed: int = 0
    low: Optional[int] = None
    high: Optional[int] = None
    weights: Optional[Tuple[Tuple[int, Fraction], ...]] = None
    value: Optional[int] = None

    @classmethod
    def uniform_range(cls, low, high, capacity, length, seed=0):
        return cls("uniform_range", capacity, length, seed, low=low, high=high)

    @classmethod
    def explicit(cls, weights: Dict[int, Fraction], capacity, length, seed=0):
        pairs = tuple(sorted((int(k), Fraction(v)) for k, v in weights.items()))
        return cls("explicit", capacity, length, seed, weights=pairs)

    @classmethod
    def constant(cls, value, capacity, length, seed=0):
        return cls("constant", capacity, length, seed, value=value)

    def support(self) -> List[int]:
        if self.kind == "uniform_range":
            return list(range(self.low, self.high + 1))
        if self.kind == "explicit":
            return [s for s, w in self.weights if w]
        if self.kind == "constant":
            return [self.value]
        raise ValueError(f"unknown distribution kind {self.kind!r}")

    def validate(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if self.capacity < 1:
            raise ValueError("capacity must be >= 1")
        if self.length < 0:
            raise ValueError("length must be >= 0")
        if self.kind == "uniform_range":
            if self.low is None or self.high is None or self.low > self.high:
                raise ValueError("uniform_range needs low <= high")
        if self.kind == "explicit":
            if not self.weights:
                raise ValueError("explicit distribution needs weights")
            if any(w < 0 for _, w in self.weights):
                raise ValueError("negative weight")
            if sum(w for _, w in self.weights) != 1:
                raise ValueError("weights must sum to exactly 1")
        if self.kind == "constant" and self.value is None:
            raise ValueError("constant distribution needs a value")
        bad = [s for s in self.support() if not 1 <= s <= self.capacity]
        if bad:
            raise ValueError(f"support {bad} outside [1, {self.capacity}]")

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "capacity": self.capacity,
             "length": self.length, "seed": self.seed}
        if self.kind == "uniform_range":
            d.update(low=self.low, high=self.high)
        elif self.kind == "explicit":
            d["weights"] = {str(s): str(w) for s, w in self.weights}
        else:
            d["value"] = self.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DistributionSpec":
        kind = d.get("kind")
        common = dict(capacity=int(d["capacity"]), length=int(d["length"]),
                      seed=int(d.get("seed", 0)))
        if kind == "uniform_range":
            return cls.uniform_range(int(d["low"]), int(d["high"]), **common)
        if kind == "explicit":
            w = {int(k): parse_rational(str(v)) for k, v in d["weights"].items()}
            return cls.explicit(w, **common)
        if kind == "constant":
            return cls.constant(int(d["value"]), **common)
        raise ValueError(f"unknown distribution kind {kind!r}")


def generate(spec: DistributionSpec) -> Instance:
    spec.validate()
    rng = SplitMix64(spec.seed)
    if spec.kind == "constant":
        items = [spec.value] * spec.length
    elif spec.kind == "uniform_range":
        items = [rng.between(spec.low, spec.high) for _ in range(spec.length)]
    else:
        den = math.lcm(*(w.denominator for _, w in spec.weights))
        cum, acc = [], 0
        for s, w in spec.weights:
            acc += int(w * den)
            cum.append((acc, s))
        items = []
        for _ in range(spec.length):
            u = rng.below(den)
            items.append(next(s for bound, s in cum if u < bound))
    return Instance(spec.capacity, items)


# ---------------------------------------------------------------- search

OBJECTIVES = ("lb", "opt")


@dataclass(frozen=True)
class SearchConfig:
    capacity: int
    max_length: int
    iterations: int
    seed: int = 0
    objective: str = "lb"
    node_budget: int = 10 ** 5

    def validate(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.max_length < 1 or self.capacity < 1:
            raise ValueError("capacity and max_length must be >= 1")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")


@dataclass
class SearchResult:
    instance: Instance
    ratio: Fraction
    improvements: List[Tuple[int, Fraction]] = field(default_factory=list)


def search_ratio(instance: Instance, objective: str, node_budget: int = 10 ** 5) -> Fraction:
    """SS bins over the lower bound or over OPT.

    For the OPT objective an exhausted node budget falls back to the proven
    lower bound, which can only overstate the ratio.
    """
    bins, _ = pack(instance)
    if objective == "opt":
        denom = opt_exact(instance, node_budget).value
    else:
        denom = size_lower_bound(instance)
    return Fraction(bins, denom) if denom else Fraction(0)


def _mutate(items: List[int], rng: SplitMix64, B: int, max_length: int) -> List[int]:
    out = list(items)
    n = len(out)
    op = rng.below(4)
    if op == 0 and n < max_length:
        out.insert(rng.below(n + 1), rng.between(1, B))
    elif op == 1 and n > 1:
        del out[rng.below(n)]
    elif op == 2:
        out[rng.below(n)] = rng.between(1, B)
    else:
        i, j = rng.below(n), rng.below(n)
        out[i], out[j] = out[j], out[i]
    return out


def adversarial_search(config: SearchConfig) -> SearchResult:
    """Hill-climb over item lists, keeping a mutant only if the ratio rises.

    The mutation kernel draws one of four moves uniformly: insert a random
    item at a random slot (skipped at max length), delete a random item
    (skipped at length 1), resize a random item, swap two random positions.
    """
    config.validate()
    B = config.capacity
    rng = SplitMix64(config.seed)
    items = [rng.between(1, B) for _ in range(rng.between(1, config.max_length))]
    best = Instance(B, items)
    best_ratio = search_ratio(best, config.objective, config.node_budget)
    history = [(0, best_ratio)]
    for it in range(1, config.iterations + 1):
        cand = Instance(B, _mutate(list(best.items), rng, B, config.max_length))
        r = search_ratio(cand, config.objective, config.node_budget)
        if r > best_ratio:
            best, best_ratio = cand, r
            history.append((it, r))
    return SearchResult(best, best_ratio, history)
