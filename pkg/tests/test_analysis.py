from dataclasses import replace
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from sumsq.analysis import (Case, MateConflict, MatePair, NotSSTrace, check_class_averages,
                            check_lemma_sequence, check_mate_pairing, check_theorem_bound,
                            lemma_violations, locate_x_xprime, verify_full_trace)
from sumsq.baselines import pack_with
from sumsq.core import Instance, PackingState, PackTrace, PlacementRecord, pack
from sumsq.corpus import staircase
from sumsq.params import PAPER_PARAMS, InfeasibleParams, ParamPair

from conftest import simulate_ss


def forged_trace(capacity, snapshot, size):
    """One new-bin event with a hand-written snapshot (not reachable by SS)."""
    rec = PlacementRecord(0, size, 0, 1, True, 0)
    return PackTrace("ss", capacity, [rec], {0: tuple(sorted(snapshot.items()))},
                     PackingState.from_counts(capacity, {size: 1}))


# ---------------------------------------------------------------- lemma

def test_lemma_examples():
    assert check_lemma_sequence(pack(Instance(10, [5, 5]))[1]) == []
    bins, trace = pack(Instance(10, [3, 3, 3, 3, 7]))
    assert bins == len(simulate_ss(10, [3, 3, 3, 3, 7]))
    assert check_lemma_sequence(trace) == []


NEGATIVE_LEMMA_FIXTURES = [
    (10, {2: 3, 6: 1}, 4, [2]),
    (10, {1: 1}, 3, [1]),               # n_1 = 1 > n_4 = 0
    (25, {3: 2, 9: 2, 15: 1}, 6, [9, 15]),
    (100, {10: 5, 40: 4, 70: 9}, 30, [10]),
]


@pytest.mark.parametrize("B,snap,size,bad_j", NEGATIVE_LEMMA_FIXTURES)
def test_lemma_negative_controls(B, snap, size, bad_j):
    assert lemma_violations(snap, size, B) == bad_j
    v = check_lemma_sequence(forged_trace(B, snap, size))
    assert [x.j for x in v] == bad_j
    assert not verify_full_trace(forged_trace(B, snap, size)).passed


def test_lemma_boundary_j_excluded():
    # j = B - s - 1 is checked, j = B - s is not
    assert lemma_violations({5: 1}, 4, 10) == [5]
    assert lemma_violations({6: 1}, 4, 10) == []


def test_lemma_requires_ss_trace():
    _, trace = pack_with("firstfit", Instance(10, [5, 5]))
    with pytest.raises(NotSSTrace):
        check_lemma_sequence(trace)
    with pytest.raises(NotSSTrace):
        verify_full_trace(trace)


# ---------------------------------------------------------------- bound

def test_theorem_bound_examples():
    b = check_theorem_bound(0, 0, 10)
    assert b.passed and b.slack == 2
    assert check_theorem_bound(2, 20, 10).passed
    assert check_theorem_bound(2, 20, 10).slack == F(50, 9)
    bad = check_theorem_bound(6, 12, 10)
    assert not bad.passed and bad.slack == F(10, 3) + 2 - 6
    with pytest.raises(ValueError):
        check_theorem_bound(1, 1, 0)


def test_theorem_bound_is_strict():
    # 25/9 * 9/25 + 2 = 3 exactly: 3 bins must fail
    assert not check_theorem_bound(3, 9, 25).passed
    assert check_theorem_bound(3, 10, 25).passed


# ---------------------------------------------------------------- x and x'

def _case_of(items, B=25):
    return locate_x_xprime(pack(Instance(B, items))[1], PAPER_PARAMS)


def test_locate_case1():
    rep = _case_of([9, 20, 12, 9, 24])
    assert rep.x is None and rep.x_prime is None and rep.case_taken is Case.CASE1


def test_locate_case2():
    # 2 fits nowhere but a new bin
    rep = _case_of([24, 24, 2])
    assert rep.case_taken is Case.CASE2
    assert rep.x == rep.x_prime == (2, 2)


def test_locate_case3():
    # the 23 closes the bin opened by the 2; the 5 then fits nowhere
    rep = _case_of([24, 2, 23, 24, 5])
    assert rep.x == (4, 5)
    assert rep.x_prime == (1, 2)
    assert rep.case_taken is Case.CASE3
    assert rep.delta_offset == 2  # m = 1, s' = 2


def test_locate_case3_without_xprime():
    rep = _case_of([24, 5])
    assert rep.case_taken is Case.CASE3 and rep.x_prime is None
    assert rep.delta_offset == 2


# ---------------------------------------------------------------- mates

def test_mate_pairing_zero_snapshot():
    checks = check_mate_pairing({}, 2, PAPER_PARAMS, 25)
    assert checks and all(c.passed for c in checks)


def test_mate_pairing_partner_level():
    checks = check_mate_pairing({}, 2, PAPER_PARAMS, 25)
    first = next(c for c in checks if c.small_level == 1)
    assert first.partner_level == 23
    assert F(1 + 23, 2) == 12 >= F(9, 25) * 25
    # small levels are exactly those below 9, one check each
    assert sorted(c.small_level for c in checks) == list(range(1, 9))


def test_mate_pairing_detects_short_partner():
    checks = check_mate_pairing({1: 2, 23: 1}, 2, PAPER_PARAMS, 25)
    bad = [c for c in checks if not c.passed]
    assert [(c.small_level, c.partner_level) for c in bad] == [(1, 23)]


def test_mate_pairing_reach_check():
    # B=100, s'=8: alpha*B = 8 -> m = 1, Delta = 8; level 8 pairs with 96 >= 92
    checks = check_mate_pairing({}, 8, PAPER_PARAMS, 100, reach_upto=8)
    reach = {c.small_level: c.reach_ok for c in checks}
    assert all(reach[l] for l in range(1, 9))
    assert reach[9] is None


def test_mate_pairing_needs_first_inequality():
    with pytest.raises(ValueError):
        check_mate_pairing({}, 2, ParamPair(F(1, 5), F(2, 5)), 25)


def test_mate_pairing_on_real_traces():
    for items in ([24, 2, 23, 24, 5], [24, 24, 2]):
        rep = verify_full_trace(pack(Instance(25, items))[1])
        assert rep.mate_checks and all(c.passed for c in rep.mate_checks)


# ---------------------------------------------------------------- classes

def test_class_single_bin_near_full():
    reps = check_class_averages({24: 1}, [], 5, 2, PAPER_PARAMS, 25)
    nonempty = [r for r in reps if r.members]
    assert len(nonempty) == 1 and nonempty[0].average_level == 24
    assert all(r.passed for r in reps)
    assert [r.h for r in reps] == [3, 4, 5, 6, 7]


def test_class_negative_control():
    reps = check_class_averages({3: 1, 9: 1}, [], 6, 2, PAPER_PARAMS, 25)
    d3 = next(r for r in reps if r.h == 3)
    # levels 3, 9, 15, 21 all below 25
    assert d3.d_h == 3
    assert d3.average_level == 6 and not d3.average_ok and not d3.passed


def test_class_honorary_requirements():
    # honorary member hanging off a class whose top level is too low to be a mate
    mates = [MatePair(0, 2, 1, 10)]
    reps = check_class_averages({10: 1, 2: 1}, mates, 8, 2, PAPER_PARAMS, 25)
    r = next(r for r in reps if r.honorary_count)
    assert r.h == 10 and r.d_h == 1
    assert r.reach_ok is False and r.d_h_at_least_2 is False and not r.passed


def test_class_honorary_on_top_level_passes():
    mates = [MatePair(0, 2, 1, 24)]
    reps = check_class_averages({2: 1, 8: 1, 16: 1, 24: 1}, mates, 8, 2, PAPER_PARAMS, 25)
    r = next(r for r in reps if r.honorary_count)
    assert (r.h, r.d_h, r.honorary_count) == (8, 2, 1)
    assert r.average_level == F(8 + 16 + 24 + 2, 4)
    assert r.passed


def test_class_mate_conflict():
    mates = [MatePair(0, 2, 5, 24), MatePair(1, 2, 5, 24)]
    with pytest.raises(MateConflict):
        check_class_averages({2: 2, 24: 1}, mates, 8, 2, PAPER_PARAMS, 25)


def test_class_range_with_fractional_delta():
    # no x': Delta = alpha*B = 2/25*30 = 12/5, classes start at 3
    reps = check_class_averages({}, [], 4, F(12, 5), PAPER_PARAMS, 30)
    assert [r.h for r in reps] == [3, 4, 5, 6]


# ---------------------------------------------------------------- end to end

def test_verify_examples():
    rep = verify_full_trace(pack(Instance(10, [7, 7, 7]))[1])
    assert rep.case_taken is Case.CASE1 and rep.bound_check.passed and rep.passed
    rep = verify_full_trace(pack(Instance(4, [2, 2]))[1])
    assert rep.bound_check.passed and rep.average_fill_ok and rep.passed


def test_verify_rejects_bad_params():
    with pytest.raises(InfeasibleParams):
        verify_full_trace(pack(Instance(10, [1]))[1], ParamPair(F(1, 4), F(1, 4)))


@pytest.mark.parametrize("copies", [1, 3])
def test_staircase_has_honorary_members(copies):
    rep = verify_full_trace(pack(staircase(copies))[1])
    assert rep.case_taken is Case.CASE3 and rep.passed
    hon = [c for c in rep.class_reports if c.honorary_count]
    assert hon and all(c.passed for c in hon)
    assert all(c.h + c.d_h * 8 >= F(23, 25) * 25 and c.d_h >= 2 for c in hon)


def test_verify_detects_tampered_record():
    _, trace = pack(Instance(10, [3, 3, 3, 3, 7]))
    recs = list(trace.records)
    recs[1] = replace(recs[1], size=9)
    bad = PackTrace("ss", 10, recs, trace.snapshots, trace.final)
    assert not verify_full_trace(bad).passed


mixed_items = st.integers(1, 60).flatmap(lambda B: st.builds(
    Instance, st.just(B),
    st.lists(st.one_of(st.integers(1, B), st.integers(1, max(1, B // 8))), max_size=120)))


@given(mixed_items)
def test_ss_traces_always_verify(inst):
    bins, trace = pack(inst)
    rep = verify_full_trace(trace)
    assert rep.passed, rep.violations
    assert (rep.x is None) == (rep.case_taken is Case.CASE1)
