"""CFSM systems and their synchronous / p2p executions.

The p2p model has one FIFO channel per ordered pair of processes.  The
exploration is bounded: a send is enabled only while its channel holds
fewer than `bound` messages, and the report flags when that bound was the
only thing blocking a continuation (making every verdict derived from the
exploration a semi-decision).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from .automata import Dfa
from .trace import Declaration, SizeLimitError


class ExecutionError(ValueError):
    """Structurally invalid execution (bad matching or event shape)."""


@dataclass(frozen=True, order=True)
class LocalAction:
    """A send `p!q:m` (process=p) or receive `p?q:m` (process=p, from q)."""

    process: str
    peer: str
    message: str
    is_send: bool

    def __str__(self) -> str:
        mark = "!" if self.is_send else "?"
        return f"{self.process}{mark}{self.peer}:{self.message}"


def send_action(sender: str, receiver: str, message: str) -> LocalAction:
    return LocalAction(sender, receiver, message, True)


def recv_action(receiver: str, sender: str, message: str) -> LocalAction:
    return LocalAction(receiver, sender, message, False)


def local_alphabet(declaration: Declaration, process: str) -> tuple[LocalAction, ...]:
    """All actions of `process` derived from the declared arrow alphabet."""
    actions = []
    for a in declaration.arrows:
        if a.sender == process:
            actions.append(send_action(a.sender, a.receiver, a.message))
        if a.receiver == process:
            actions.append(recv_action(a.receiver, a.sender, a.message))
    return tuple(actions)


@dataclass(frozen=True)
class Cfsm:
    """Per-process local automaton over that process's send/receive actions."""

    process: str
    automaton: Dfa

    def __post_init__(self):
        for act in self.automaton.alphabet:
            if act.process != self.process:
                raise ValueError(f"action {act} does not belong to process {self.process}")


@dataclass(frozen=True)
class System:
    """One CFSM per declared process, in declaration order."""

    declaration: Declaration
    cfsms: tuple[Cfsm, ...]

    def __post_init__(self):
        object.__setattr__(self, "cfsms", tuple(self.cfsms))
        procs = tuple(c.process for c in self.cfsms)
        if procs != tuple(self.declaration.processes):
            raise ValueError("CFSMs must cover the declared processes, in order")

    def cfsm(self, process: str) -> Cfsm:
        return self.cfsms[self.declaration.processes.index(process)]


# ---------------------------------------------------------------------------
# synchronous exploration


@dataclass(frozen=True)
class SyncGraph:
    """Reachable rendezvous configurations of a system."""

    configurations: tuple[tuple[int, ...], ...]
    initial: tuple[int, ...]
    edges: tuple[tuple[tuple[int, ...], object, tuple[int, ...]], ...]
    accepting: frozenset


def sync_explore(system: System) -> SyncGraph:
    """BFS over tuples of local states under rendezvous communication."""
    decl = system.declaration
    init = tuple(c.automaton.initial for c in system.cfsms)
    pidx = {p: i for i, p in enumerate(decl.processes)}
    seen = {init}
    edges = []
    queue = deque([init])
    while queue:
        cfg = queue.popleft()
        for arrow in decl.arrows:
            si, ri = pidx[arrow.sender], pidx[arrow.receiver]
            s2 = system.cfsms[si].automaton.dstep(
                cfg[si], send_action(arrow.sender, arrow.receiver, arrow.message))
            r2 = system.cfsms[ri].automaton.dstep(
                cfg[ri], recv_action(arrow.receiver, arrow.sender, arrow.message))
            if s2 is None or r2 is None:
                continue
            nxt = list(cfg)
            nxt[si], nxt[ri] = s2, r2
            nxt = tuple(nxt)
            edges.append((cfg, arrow, nxt))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    accepting = frozenset(
        cfg for cfg in seen
        if all(cfg[i] in c.automaton.accepting for i, c in enumerate(system.cfsms))
    )
    return SyncGraph(tuple(sorted(seen)), init, tuple(edges), accepting)


# ---------------------------------------------------------------------------
# executions and p2p MSCs


@dataclass(frozen=True)
class Event:
    is_send: bool
    sender: str
    receiver: str
    message: str
    match: int | None = None  # for receives: index of the matching send

    @property
    def process(self) -> str:
        return self.sender if self.is_send else self.receiver

    def __str__(self) -> str:
        if self.is_send:
            return f"{self.sender}!{self.receiver}:{self.message}"
        return f"{self.receiver}?{self.sender}:{self.message}"


@dataclass(frozen=True)
class Execution:
    events: tuple[Event, ...]

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        matched = set()
        for i, e in enumerate(self.events):
            if e.is_send:
                if e.match is not None:
                    raise ExecutionError("send events carry no match index")
                continue
            j = e.match
            if j is None or not 0 <= j < i:
                raise ExecutionError(f"receive {i} must match an earlier send")
            s = self.events[j]
            if not s.is_send or (s.sender, s.receiver, s.message) != (e.sender, e.receiver, e.message):
                raise ExecutionError(f"receive {i} matches incompatible event {j}")
            if j in matched:
                raise ExecutionError(f"send {j} matched twice")
            matched.add(j)

    @property
    def unmatched_sends(self) -> frozenset[int]:
        matched = {e.match for e in self.events if not e.is_send}
        return frozenset(i for i, e in enumerate(self.events)
                         if e.is_send and i not in matched)

    def __str__(self) -> str:
        return ";".join(str(e) for e in self.events)


# per-process event labels inside a P2pMsc: (is_send, peer, message)
def _label(e: Event) -> tuple[bool, str, str]:
    return (e.is_send, e.receiver if e.is_send else e.sender, e.message)


@dataclass(frozen=True)
class P2pMsc:
    """Interleaving-invariant view of an execution.

    Events are grouped per process (total order within each process) and a
    matching relation pairs sends with their receives.  The partial order
    is the transitive closure of process order plus matching edges.
    """

    events: tuple[tuple[str, tuple[tuple[bool, str, str], ...]], ...]
    matching: frozenset  # pairs ((p, i), (q, j))

    @cached_property
    def order(self) -> nx.DiGraph:
        g = nx.DiGraph()
        for p, evs in self.events:
            for i in range(len(evs)):
                g.add_node((p, i))
                if i > 0:
                    g.add_edge((p, i - 1), (p, i))
        for s, r in self.matching:
            g.add_edge(s, r)
        return g

    @cached_property
    def closure(self) -> nx.DiGraph:
        return nx.transitive_closure_dag(self.order)

    def label(self, node) -> tuple[bool, str, str]:
        p, i = node
        return dict(self.events)[p][i]

    def __len__(self) -> int:
        return sum(len(evs) for _, evs in self.events)

    def precedes(self, a, b) -> bool:
        return self.closure.has_edge(a, b)

    def __str__(self) -> str:
        parts = []
        for p, evs in self.events:
            labels = [f"{p}{'!' if is_send else '?'}{peer}:{msg}"
                      for is_send, peer, msg in evs]
            parts.append(f"{p}: " + " ".join(labels))
        return " | ".join(parts)


def msc_of_execution(e: Execution) -> P2pMsc:
    per_process: dict[str, list] = {}
    position: dict[int, tuple[str, int]] = {}
    for i, ev in enumerate(e.events):
        p = ev.process
        per_process.setdefault(p, [])
        position[i] = (p, len(per_process[p]))
        per_process[p].append(_label(ev))
    matching = frozenset(
        (position[ev.match], position[i])
        for i, ev in enumerate(e.events) if not ev.is_send
    )
    events = tuple(sorted((p, tuple(evs)) for p, evs in per_process.items()))
    return P2pMsc(events, matching)


def linearisations_p2p(m: P2pMsc, limit: int = 10) -> list[Execution]:
    """All linear extensions of the MSC partial order, as executions."""
    if len(m) > limit:
        raise SizeLimitError(f"MSC has {len(m)} events, limit is {limit}")
    if len(m) == 0:
        return [Execution(())]
    match_of = {r: s for s, r in m.matching}
    results = []
    for topo in nx.all_topological_sorts(m.order):
        index = {node: k for k, node in enumerate(topo)}
        events = []
        for node in topo:
            is_send, peer, message = m.label(node)
            p = node[0]
            if is_send:
                events.append(Event(True, p, peer, message))
            else:
                events.append(Event(False, peer, p, message, match=index[match_of[node]]))
        results.append(Execution(tuple(events)))
    return results


def is_p2p_execution(e: Execution) -> bool:
    """FIFO validity, phrased on the MSC partial order.

    For any two same-channel sends s1 ≺ s2: s2 is unmatched, or both are
    matched and the receives are ordered r1 ≺ r2.
    """
    m = msc_of_execution(e)
    match_of = dict(m.matching)
    per_channel: dict[tuple[str, str], list] = {}
    for p, evs in m.events:
        for i, (is_send, peer, _) in enumerate(evs):
            if is_send:
                per_channel.setdefault((p, peer), []).append((p, i))
    for sends in per_channel.values():
        # same-process sends: the MSC order is the per-process index order
        sends.sort(key=lambda node: node[1])
        for s1, s2 in itertools.combinations(sends, 2):
            if s2 not in match_of:
                continue
            if s1 not in match_of:
                return False
            r1, r2 = match_of[s1], match_of[s2]
            if not m.precedes(r1, r2):
                return False
    return True


def is_p2p_execution_by_sequence(e: Execution) -> bool:
    """FIFO validity checked directly on the event sequence order."""
    recv_of = {ev.match: i for i, ev in enumerate(e.events) if not ev.is_send}
    per_channel: dict[tuple[str, str], list[int]] = {}
    for i, ev in enumerate(e.events):
        if ev.is_send:
            per_channel.setdefault((ev.sender, ev.receiver), []).append(i)
    for sends in per_channel.values():
        for s1, s2 in itertools.combinations(sends, 2):
            if s2 not in recv_of:
                continue
            if s1 not in recv_of or recv_of[s1] > recv_of[s2]:
                return False
    return True


def is_rsc_schedulable(m: P2pMsc) -> tuple[bool, Execution | None]:
    """Can every receive be scheduled immediately after its send?

    Matched pairs are scheduled as atomic blocks, unmatched sends as unit
    blocks; backtracking over order-minimal blocks.  True exactly when the
    MSC is a prefix of a synchronous MSC.
    """
    match_of = dict(m.matching)  # send -> recv
    nodes = list(m.order.nodes)
    blocks = []
    in_block = {}
    for node in nodes:
        if m.label(node)[0]:  # send
            pair = (node, match_of.get(node))
            blocks.append(pair)
            in_block[node] = pair
            if pair[1] is not None:
                in_block[pair[1]] = pair
    preds = {node: set(m.order.predecessors(node)) for node in nodes}

    def ready(block, done):
        members = {block[0]} | ({block[1]} if block[1] else set())
        for node in members:
            if any(p not in done and p not in members for p in preds[node]):
                return False
        return True

    schedule: list[Event] = []

    def rec(done, remaining):
        if not remaining:
            return True
        for block in list(remaining):
            if ready(block, done):
                send, recv = block
                p, _ = send
                _, peer, message = m.label(send)
                n_before = len(schedule)
                schedule.append(Event(True, p, peer, message))
                if recv is not None:
                    schedule.append(Event(False, p, recv[0], message, match=n_before))
                members = {send} | ({recv} if recv else set())
                if rec(done | members, remaining - {block}):
                    return True
                del schedule[n_before:]
        return False

    if rec(frozenset(), frozenset(blocks)):
        return True, Execution(tuple(schedule))
    return False, None


def is_msc_prefix(prefix: P2pMsc, m: P2pMsc) -> bool:
    """Is `prefix` the MSC of a prefix of some linearisation of `m`?

    Requires: per-process label sequences are prefixes, the selected event
    set is downward closed in `m`'s order, and the matchings agree on the
    receives kept.
    """
    lens = {p: len(evs) for p, evs in prefix.events}
    full = dict(m.events)
    for p, evs in prefix.events:
        if p not in full and evs:
            return False
        if p in full and tuple(full[p][: len(evs)]) != tuple(evs):
            return False
    kept = {(p, i) for p, evs in prefix.events for i in range(len(evs))}
    # downward closure in m's order
    for node in kept:
        for pred in m.order.predecessors(node):
            if pred not in kept:
                return False
    expected = frozenset((s, r) for s, r in m.matching if r in kept)
    return expected == prefix.matching


# ---------------------------------------------------------------------------
# p2p exploration


@dataclass(frozen=True)
class P2pConfiguration:
    locals: tuple[int, ...]
    channels: tuple[tuple[str, ...], ...]  # aligned with the channel key order


@dataclass
class P2pReport:
    configurations: list
    finals: list
    deadlocks: list          # (configuration, event path)
    orphans: list            # deadlocked, all locals accepting, channels non-empty
    bound_hit: bool
    channel_keys: tuple


def _channel_keys(declaration: Declaration) -> tuple[tuple[str, str], ...]:
    return tuple((p, q) for p in declaration.processes
                 for q in declaration.processes if p != q)


def p2p_explore(system: System, bound: int) -> P2pReport:
    """BFS over p2p configurations with per-channel capacity `bound`."""
    if bound < 1:
        raise ValueError("channel bound must be >= 1")
    decl = system.declaration
    keys = _channel_keys(decl)
    kidx = {k: i for i, k in enumerate(keys)}
    pidx = {p: i for i, p in enumerate(decl.processes)}
    init = P2pConfiguration(tuple(c.automaton.initial for c in system.cfsms),
                            tuple(() for _ in keys))
    parent: dict[P2pConfiguration, tuple[P2pConfiguration, LocalAction] | None] = {init: None}
    queue = deque([init])
    bound_hit = False
    deadlocks, finals, orphans = [], [], []
    while queue:
        cfg = queue.popleft()
        enabled = []
        blocked_by_bound = False
        for i, cfsm in enumerate(system.cfsms):
            s = cfg.locals[i]
            for (src, act), dst in cfsm.automaton.delta.items():
                if src != s:
                    continue
                if act.is_send:
                    ch = kidx[(act.process, act.peer)]
                    if len(cfg.channels[ch]) >= bound:
                        blocked_by_bound = True
                        continue
                    channels = list(cfg.channels)
                    channels[ch] = channels[ch] + (act.message,)
                else:
                    ch = kidx[(act.peer, act.process)]
                    if not cfg.channels[ch] or cfg.channels[ch][0] != act.message:
                        continue
                    channels = list(cfg.channels)
                    channels[ch] = channels[ch][1:]
                locals_ = list(cfg.locals)
                locals_[i] = dst
                enabled.append((act, P2pConfiguration(tuple(locals_), tuple(channels))))
        if blocked_by_bound:
            bound_hit = True
        all_accepting = all(cfg.locals[i] in c.automaton.accepting
                            for i, c in enumerate(system.cfsms))
        empty_channels = all(not ch for ch in cfg.channels)
        if all_accepting and empty_channels:
            finals.append(cfg)
        if not enabled and not (all_accepting and empty_channels):
            path = []
            node = cfg
            while parent[node] is not None:
                node, act = parent[node]
                path.append(act)
            path.reverse()
            deadlocks.append((cfg, tuple(path)))
            if all_accepting and not empty_channels:
                orphans.append((cfg, tuple(path)))
        for act, nxt in enabled:
            if nxt not in parent:
                parent[nxt] = (cfg, act)
                queue.append(nxt)
    return P2pReport(list(parent), finals, deadlocks, orphans, bound_hit, keys)


def p2p_mscs(system: System, bound: int, max_events: int = 8):
    """MSCs of all explored p2p executions with at most `max_events` events.

    Returns (set of P2pMsc, bound_hit).  The search is memoised on
    (configuration, MSC): two interleavings of the same behaviour are
    explored once.
    """
    decl = system.declaration
    keys = _channel_keys(decl)
    kidx = {k: i for i, k in enumerate(keys)}
    init_cfg = P2pConfiguration(tuple(c.automaton.initial for c in system.cfsms),
                                tuple(() for _ in keys))
    # channel contents carry the originating send index for matching
    mscs = {}
    bound_hit = False
    seen = set()

    def rec(cfg, pending, events):
        nonlocal bound_hit
        execution = Execution(tuple(events))
        m = msc_of_execution(execution)
        # the continuation depends only on the configuration and the MSC,
        # not on which interleaving produced it
        key = (cfg, m)
        if key in seen:
            return
        seen.add(key)
        mscs.setdefault(m, execution)
        if len(events) >= max_events:
            if any(_has_step(cfg, pending, i, c) for i, c in enumerate(system.cfsms)):
                bound_hit = True  # truncated by the event budget, not exhausted
            return
        for i, cfsm in enumerate(system.cfsms):
            s = cfg.locals[i]
            for (src, act), dst in cfsm.automaton.delta.items():
                if src != s:
                    continue
                if act.is_send:
                    ch = kidx[(act.process, act.peer)]
                    if len(cfg.channels[ch]) >= bound:
                        bound_hit = True
                        continue
                    channels = list(cfg.channels)
                    channels[ch] = channels[ch] + (act.message,)
                    new_pending = list(pending)
                    new_pending[ch] = new_pending[ch] + (len(events),)
                    ev = Event(True, act.process, act.peer, act.message)
                else:
                    ch = kidx[(act.peer, act.process)]
                    if not cfg.channels[ch] or cfg.channels[ch][0] != act.message:
                        continue
                    channels = list(cfg.channels)
                    channels[ch] = channels[ch][1:]
                    new_pending = list(pending)
                    match = new_pending[ch][0]
                    new_pending[ch] = new_pending[ch][1:]
                    ev = Event(False, act.peer, act.process, act.message, match=match)
                locals_ = list(cfg.locals)
                locals_[i] = dst
                rec(P2pConfiguration(tuple(locals_), tuple(channels)),
                    tuple(new_pending), events + [ev])

    def _has_step(cfg, pending, i, cfsm):
        s = cfg.locals[i]
        for (src, act), _ in cfsm.automaton.delta.items():
            if src != s:
                continue
            if act.is_send:
                if len(cfg.channels[kidx[(act.process, act.peer)]]) < bound:
                    return True
            else:
                ch = kidx[(act.peer, act.process)]
                if cfg.channels[ch] and cfg.channels[ch][0] == act.message:
                    return True
        return False

    rec(init_cfg, tuple(() for _ in keys), [])
    return mscs, bound_hit


@dataclass
class CausalClosureReport:
    checked_mscs: int
    checked_linearisations: int
    violations: list

    @property
    def passed(self) -> bool:
        return not self.violations


def check_causal_closure(system: System, bound: int, max_events: int = 8,
                         samples: int | None = None) -> CausalClosureReport:
    """Every linearisation of every explored p2p MSC must be a p2p execution."""
    mscs, _ = p2p_mscs(system, bound, max_events)
    violations = []
    n_lins = 0
    items = list(mscs)
    if samples is not None:
        items = items[:samples]
    for m in items:
        for e in linearisations_p2p(m, limit=max_events):
            n_lins += 1
            if not is_p2p_execution(e):
                violations.append((m, e))
    return CausalClosureReport(len(items), n_lins, violations)
