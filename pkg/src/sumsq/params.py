"""The (alpha, delta) constraint system behind the 25/9 bound, in exact rationals.

Each constraint is linear, ``a * alpha + b * delta <= c`` (or ``<`` when
strict), so feasibility is a handful of Fraction comparisons and maximizing
delta is a vertex enumeration over pairs of constraint boundaries.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

F = Fraction


class InfeasibleParams(ValueError):
    pass


@dataclass(frozen=True)
class ParamPair:
    alpha: Fraction
    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", F(self.alpha))
        object.__setattr__(self, "delta", F(self.delta))

    @classmethod
    def parse(cls, alpha: str, delta: str) -> "ParamPair":
        return cls(parse_rational(alpha), parse_rational(delta))

    def __str__(self):
        return f"alpha = {self.alpha}, delta = {self.delta}"


PAPER_PARAMS = ParamPair(F(2, 25), F(9, 25))


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer. Decimal strings are rejected."""
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational of the form p/q: {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return F(p, q)


@dataclass(frozen=True)
class Constraint:
    name: str
    a: Fraction  # coefficient of alpha
    b: Fraction  # coefficient of delta
    c: Fraction
    strict: bool = False

    def slack(self, p: ParamPair) -> Fraction:
        return self.c - self.a * p.alpha - self.b * p.delta

    def holds(self, p: ParamPair) -> bool:
        s = self.slack(p)
        return s > 0 if self.strict else s >= 0

    def __str__(self):
        op = "<" if self.strict else "<="
        return f"{self.name}: {self.a}*alpha + {self.b}*delta {op} {self.c}"


# 2a <= 1 - 2d ; (1 + a)/3 >= d ; a <= 2 - 16d/3 ; 0 < a < d <= 1/2
PROOF_CONSTRAINTS: Tuple[Constraint, ...] = (
    Constraint("(2.1)", F(2), F(2), F(1)),
    Constraint("(2.2)", F(-1, 3), F(1), F(1, 3)),
    Constraint("(2.3)", F(1), F(16, 3), F(2)),
    Constraint("alpha>0", F(-1), F(0), F(0), strict=True),
    Constraint("alpha<delta", F(1), F(-1), F(0), strict=True),
    Constraint("delta<=1/2", F(0), F(1), F(1, 2)),
)


def feasible(params: ParamPair,
             system: Sequence[Constraint] = PROOF_CONSTRAINTS
             ) -> Tuple[bool, List[Tuple[str, Fraction]]]:
    slacks = [(c.name, c.slack(params)) for c in system]
    ok = all(c.holds(params) for c in system)
    return ok, slacks


def _intersect(c1: Constraint, c2: Constraint) -> Optional[ParamPair]:
    det = c1.a * c2.b - c2.a * c1.b
    if det == 0:
        return None
    alpha = (c1.c * c2.b - c2.c * c1.b) / det
    delta = (c1.a * c2.c - c2.a * c1.c) / det
    return ParamPair(alpha, delta)


def maximize_delta(system: Sequence[Constraint] = PROOF_CONSTRAINTS) -> ParamPair:
    """Exact maximizer of delta over the system.

    Vertices satisfying the closure of every constraint are enumerated; the
    best one must also satisfy the strict constraints, otherwise the supremum
    is not attained and InfeasibleParams is raised. Among vertices with the
    same delta the smallest alpha wins.  Assumes the feasible region is bounded
    in delta (true for the proof system since delta <= 1/2).
    """
    closed = [Constraint(c.name, c.a, c.b, c.c) for c in system]
    vertices = []
    for c1, c2 in combinations(closed, 2):
        v = _intersect(c1, c2)
        if v is not None and all(c.holds(v) for c in closed):
            vertices.append(v)
    if not vertices:
        raise InfeasibleParams("constraint system has no feasible vertex")
    top = max(v.delta for v in vertices)
    best = min((v for v in vertices if v.delta == top), key=lambda v: v.alpha)
    if not feasible(best, system)[0]:
        raise InfeasibleParams(
            f"supremum delta = {top} is not attained (strict constraint binds)")
    return best


def derived_facts(params: ParamPair) -> List[Tuple[str, bool]]:
    """Auxiliary inequalities the case analysis leans on, B divided out."""
    ok, slacks = feasible(params)
    if not ok:
        bad = [name for name, _ in slacks
               if not next(c for c in PROOF_CONSTRAINTS if c.name == name).holds(params)]
        raise InfeasibleParams(f"{params} violates {', '.join(bad)}")
    a, d = params.alpha, params.delta
    return [
        ("delta <= 3/8", d <= F(3, 8)),
        ("delta < 2/5", d < F(2, 5)),
        ("(1 - alpha)/2 >= delta", (1 - a) / 2 >= d),
        ("(1 + alpha)/3 >= delta", (1 + a) / 3 >= d),
        ("(3/8)(1 - alpha/2) >= delta", F(3, 8) * (1 - a / 2) >= d),
        ("1 - 3*delta/2 > delta", 1 - F(3, 2) * d > d),
        ("alpha + 2*delta <= 1 - alpha", a + 2 * d <= 1 - a),
    ]


def check_params(params: ParamPair):
    """Raise InfeasibleParams unless ``params`` satisfies the proof system."""
    ok, slacks = feasible(params)
    if not ok:
        raise InfeasibleParams(f"{params} is infeasible: "
                               + ", ".join(f"{n} slack {s}" for n, s in slacks))
