import random

import pytest

from chorcheck.gtype import project
from chorcheck.semantics import (Event, Execution, ExecutionError,
                                 check_causal_closure, is_msc_prefix,
                                 is_p2p_execution, is_p2p_execution_by_sequence,
                                 is_rsc_schedulable, linearisations_p2p,
                                 local_alphabet, msc_of_execution, p2p_explore,
                                 p2p_mscs, recv_action, send_action,
                                 sync_explore)


def s(p, q, m):
    return Event(True, p, q, m)


def r(p, q, m, match):
    return Event(False, p, q, m, match=match)


def test_local_action_str():
    assert str(send_action("p", "q", "m")) == "p!q:m"
    assert str(recv_action("q", "p", "m")) == "q?p:m"


def test_local_alphabet(real):
    acts = local_alphabet(real.declaration, "q")
    assert set(map(str, acts)) == {"q?p:a", "q!r:b"}


def test_execution_validation():
    with pytest.raises(ExecutionError):
        Execution((r("p", "q", "m", 0),))                   # no earlier send
    with pytest.raises(ExecutionError):
        Execution((s("p", "q", "m"), r("p", "q", "x", 0)))  # wrong message
    ok = Execution((s("p", "q", "m"), r("p", "q", "m", 0)))
    assert ok.unmatched_sends == frozenset()
    with pytest.raises(ExecutionError):
        Execution((s("p", "q", "m"), r("p", "q", "m", 0), r("p", "q", "m", 0)))


def test_sync_explore_counts(real, deadlock):
    assert len(sync_explore(project(real)).configurations) == 3
    graph = sync_explore(project(deadlock))
    assert graph.accepting


def test_msc_of_execution_interleaving_invariant():
    e1 = Execution((s("p", "q", "m"), s("r", "x", "n"), r("p", "q", "m", 0),
                    r("r", "x", "n", 1)))
    e2 = Execution((s("r", "x", "n"), s("p", "q", "m"), r("r", "x", "n", 0),
                    r("p", "q", "m", 1)))
    assert msc_of_execution(e1) == msc_of_execution(e2)


def test_linearisations_p2p_roundtrip():
    e = Execution((s("p", "q", "m"), r("p", "q", "m", 0), s("q", "p", "n"),
                   r("q", "p", "n", 2)))
    m = msc_of_execution(e)
    lins = linearisations_p2p(m)
    assert any(msc_of_execution(x) == m for x in lins)
    assert all(msc_of_execution(x) == m for x in lins)


def test_fifo_violation_detected():
    # two sends on the same channel received out of order
    e = Execution((s("p", "q", "a"), s("p", "q", "a"),
                   r("p", "q", "a", 1), r("p", "q", "a", 0)))
    assert not is_p2p_execution(e)
    assert not is_p2p_execution_by_sequence(e)
    ok = Execution((s("p", "q", "a"), s("p", "q", "a"),
                    r("p", "q", "a", 0), r("p", "q", "a", 1)))
    assert is_p2p_execution(ok)
    assert is_p2p_execution_by_sequence(ok)


def test_fifo_unmatched_earlier_send_blocks_later_receive():
    e = Execution((s("p", "q", "a"), s("p", "q", "a"), r("p", "q", "a", 1)))
    assert not is_p2p_execution(e)
    assert not is_p2p_execution_by_sequence(e)


def _random_candidate(rng):
    procs = ["p", "q", "x"]
    events = []
    sends = []
    for _ in range(rng.randint(1, 7)):
        if sends and rng.random() < 0.5:
            j = rng.choice(sends)
            ev = events[j]
            events.append(r(ev.sender, ev.receiver, ev.message, j))
            sends.remove(j)
        else:
            a, b = rng.sample(procs, 2)
            events.append(s(a, b, rng.choice("mn")))
            sends.append(len(events) - 1)
    return Execution(tuple(events))


def test_fifo_definitions_agree_on_random_executions():
    rng = random.Random(23)
    seen_both = seen_valid = 0
    for _ in range(200):
        e = _random_candidate(rng)
        a, b = is_p2p_execution(e), is_p2p_execution_by_sequence(e)
        assert a == b
        seen_both += 1
        seen_valid += a
    assert seen_valid and seen_valid < seen_both


def test_rsc_schedulable():
    e = Execution((s("p", "q", "m"), r("p", "q", "m", 0)))
    ok, schedule = is_rsc_schedulable(msc_of_execution(e))
    assert ok and len(schedule.events) == 2
    # crossing square: both send before either receives
    cross = Execution((s("p", "q", "m"), s("q", "p", "n"),
                       r("p", "q", "m", 0), r("q", "p", "n", 1)))
    ok, schedule = is_rsc_schedulable(msc_of_execution(cross))
    assert not ok and schedule is None


def test_is_msc_prefix():
    full = msc_of_execution(Execution((s("p", "q", "m"), r("p", "q", "m", 0),
                                       s("q", "p", "n"), r("q", "p", "n", 2))))
    pre = msc_of_execution(Execution((s("p", "q", "m"), r("p", "q", "m", 0))))
    assert is_msc_prefix(pre, full)
    assert is_msc_prefix(full, full)
    assert not is_msc_prefix(full, pre)
    # keeping the send but dropping its receive changes the matching
    orphan = msc_of_execution(Execution((s("q", "p", "n"),)))
    assert not is_msc_prefix(orphan, full)


def test_p2p_explore_real(real):
    report = p2p_explore(project(real), 1)
    assert not report.deadlocks
    assert not report.orphans
    assert report.finals


def test_p2p_explore_deadlock(deadlock):
    report = p2p_explore(project(deadlock), 2)
    assert report.deadlocks
    cfg, path = report.deadlocks[0]
    assert path  # witness path leads somewhere


def test_p2p_explore_bound_validation(real):
    with pytest.raises(ValueError):
        p2p_explore(project(real), 0)


def test_p2p_mscs_cross(cross):
    mscs, bound_hit = p2p_mscs(project(cross), 2, 6)
    assert not bound_hit
    squares = [m for m in mscs if len(m) == 4]
    assert any(not is_rsc_schedulable(m)[0] for m in squares)


def test_causal_closure_fixtures(fixture_suite):
    for g in fixture_suite.values():
        report = check_causal_closure(project(g), 2, 6)
        assert report.passed, g.name
        assert report.checked_linearisations >= report.checked_mscs
