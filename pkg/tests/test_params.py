from fractions import Fraction as F

import pytest

from sumsq.params import (PAPER_PARAMS, PROOF_CONSTRAINTS, Constraint, InfeasibleParams,
                          ParamPair, derived_facts, feasible, maximize_delta,
                          parse_rational)


def grid_feasible(a, d):
    """Direct restatement of the constraint system, independent of Constraint."""
    return (2 * a <= 1 - 2 * d and (1 + a) / 3 >= d and a <= 2 - F(16, 3) * d
            and 0 < a < d <= F(1, 2))


def grid_max(step, ok):
    best = None
    for dn in range(1, step // 2 + 1):
        d = F(dn, step)
        for an in range(1, dn):
            a = F(an, step)
            if ok(a, d) and (best is None or d > best[1]):
                best = (a, d)
                break
    return best


def test_paper_pair_slacks():
    ok, slacks = feasible(PAPER_PARAMS)
    assert ok
    s = dict(slacks)
    assert s["(2.1)"] == F(3, 25)
    assert s["(2.2)"] == 0
    assert s["(2.3)"] == 0


def test_infeasible_examples():
    assert not feasible(ParamPair(F(2, 25), F(2, 5)))[0]
    # (2.2) needs alpha >= 3*delta - 1
    assert dict(feasible(ParamPair(F(2, 25), F(2, 5)))[1])["(2.2)"] < 0
    assert not feasible(ParamPair(F(1, 4), F(1, 4)))[0]
    assert not feasible(ParamPair(F(1, 2), F(1, 2)))[0]


def test_strictness():
    assert not feasible(ParamPair(0, F(1, 4)))[0]          # alpha > 0 strict
    assert feasible(ParamPair(F(1, 100), F(1, 3)))[0]
    assert not feasible(ParamPair(F(1, 10), F(1, 10)))[0]  # alpha < delta strict


def test_maximize_delta():
    best = maximize_delta()
    assert best == ParamPair(F(2, 25), F(9, 25))
    assert feasible(best)[0]


def test_grid_search_agrees():
    assert grid_max(200, grid_feasible) == (F(2, 25), F(9, 25))


def test_perturbed_system():
    system = list(PROOF_CONSTRAINTS)
    system[2] = Constraint("(2.3')", F(1), F(5), F(2))  # alpha <= 2 - 5 delta

    def ok(a, d):
        return (2 * a <= 1 - 2 * d and (1 + a) / 3 >= d and a <= 2 - 5 * d
                and 0 < a < d <= F(1, 2))

    best = maximize_delta(system)
    assert best == ParamPair(F(1, 8), F(3, 8))
    g = grid_max(1000, ok)
    assert g[1] == best.delta


def test_unattained_supremum_raises():
    # only strict bounds on delta from above: sup not attained
    system = [Constraint("a>0", F(-1), F(0), F(0), strict=True),
              Constraint("a<d", F(1), F(-1), F(0), strict=True),
              Constraint("d<1/3", F(0), F(1), F(1, 3), strict=True)]
    with pytest.raises(InfeasibleParams):
        maximize_delta(system)


def test_derived_facts_paper():
    facts = dict(derived_facts(PAPER_PARAMS))
    assert all(facts.values())
    assert F(3, 8) * (1 - F(1, 25)) == F(9, 25)


def test_derived_facts_rejects_infeasible():
    p = ParamPair(F(1, 8), F(3, 8))
    assert 2 * p.alpha == 1 - 2 * p.delta  # (2.1) holds with equality
    with pytest.raises(InfeasibleParams):
        derived_facts(p)


def test_derived_facts_hold_on_feasible_grid():
    step = 100
    count = 0
    for dn in range(1, step // 2 + 1):
        for an in range(1, dn):
            p = ParamPair(F(an, step), F(dn, step))
            if feasible(p)[0]:
                count += 1
                assert all(h for _, h in derived_facts(p)), p
    assert count > 100


def test_optimum_unique_in_alpha():
    d = F(9, 25)
    # at delta = 9/25, (2.2) gives alpha >= 2/25 and (2.3) gives alpha <= 2/25
    assert 3 * d - 1 == F(2, 25) == 2 - F(16, 3) * d
    assert not any(feasible(ParamPair(F(9, 25) + F(1, 10 ** 6), a))[0]
                   for a in (F(1, 25), F(2, 25), F(3, 25)))


@pytest.mark.parametrize("text,value", [("2/25", F(2, 25)), ("3", F(3)), (" -1/2 ", F(-1, 2))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.08", "1/0", "a/b", ""])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)
