import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

from sumsq.core import PackingState


def brute_ss(state):
    return sum(c * c for c in state.counts[1:state.capacity])


def brute_delta(state, size, target):
    """ss after minus ss before, by rebuilding the count vector by hand."""
    counts = list(state.counts)
    if target:
        counts[target] -= 1
    if target + size < state.capacity:
        counts[target + size] += 1
    after = sum(c * c for c in counts[1:state.capacity])
    return after - brute_ss(state)


def brute_ss_argmin(state, size):
    """Every feasible target scored from scratch, tie rule applied by sort."""
    options = [(brute_delta(state, size, 0), 0)]
    for h in range(1, state.capacity - size + 1):
        if state.counts[h]:
            options.append((brute_delta(state, size, h), h))
    return min(options, key=lambda dh: (dh[0], -dh[1]))


def simulate_ss(capacity, items):
    """Reference SS on an explicit list of bin levels."""
    levels = []
    state = PackingState(capacity)
    for s in items:
        d, h = brute_ss_argmin(state, s)
        if h == 0:
            levels.append(s)
        else:
            levels[levels.index(h)] += s
        state.place(s, h)
    return levels


ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {key}: {detail}")
