"""A small finite-automaton toolkit over arbitrary hashable letters.

States are integer indices; letters are whatever hashable values the
caller uses (arrows, local actions, plain strings in tests).  The letter
order is the position in the alphabet tuple and determines witness-word
tie-breaking (shortest, then lexicographically least).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

EPS = None


class AlphabetMismatchError(ValueError):
    """Binary operation applied to automata over different alphabets."""


class AutomatonError(ValueError):
    """Structurally invalid automaton."""


def _validate(alphabet, n_states, transitions, accepting, initials):
    letters = set(alphabet)
    if len(letters) != len(alphabet):
        raise AutomatonError("duplicate letters in alphabet")
    for s in initials:
        if not 0 <= s < n_states:
            raise AutomatonError(f"initial state {s} out of range")
    for s in accepting:
        if not 0 <= s < n_states:
            raise AutomatonError(f"accepting state {s} out of range")
    for s, x, t in transitions:
        if not (0 <= s < n_states and 0 <= t < n_states):
            raise AutomatonError(f"transition ({s},{x},{t}) out of range")
        if x is not EPS and x not in letters:
            raise AutomatonError(f"transition letter {x!r} not in alphabet")


@dataclass(frozen=True)
class Nfa:
    alphabet: tuple
    n_states: int
    initial: frozenset
    transitions: frozenset  # triples (src, letter-or-EPS, dst)
    accepting: frozenset
    names: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        _validate(self.alphabet, self.n_states, self.transitions, self.accepting, self.initial)
        if self.names is not None and len(self.names) != self.n_states:
            raise AutomatonError("names length does not match state count")

    @cached_property
    def _step_map(self) -> dict:
        m: dict = {}
        for s, x, t in self.transitions:
            m.setdefault((s, x), set()).add(t)
        return m

    @cached_property
    def letter_index(self) -> dict:
        return {x: i for i, x in enumerate(self.alphabet)}

    @property
    def epsilon_free(self) -> bool:
        return all(x is not EPS for _, x, _ in self.transitions)

    def eps_closure(self, states) -> frozenset:
        seen = set(states)
        stack = list(states)
        while stack:
            s = stack.pop()
            for t in self._step_map.get((s, EPS), ()):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    def step(self, states, letter) -> frozenset:
        nxt = set()
        for s in states:
            nxt |= self._step_map.get((s, letter), set())
        return self.eps_closure(nxt)

    def accepts(self, word) -> bool:
        states = self.eps_closure(self.initial)
        for x in word:
            states = self.step(states, x)
            if not states:
                return False
        return bool(states & self.accepting)

    def state_name(self, s: int) -> str:
        return self.names[s] if self.names else f"s{s}"


@dataclass(frozen=True)
class Dfa:
    alphabet: tuple
    n_states: int
    initial: int
    transitions: frozenset  # triples (src, letter, dst), at most one per (src, letter)
    accepting: frozenset
    names: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        _validate(self.alphabet, self.n_states, self.transitions, self.accepting, [self.initial])
        seen = set()
        for s, x, _ in self.transitions:
            if x is EPS:
                raise AutomatonError("epsilon transition in a DFA")
            if (s, x) in seen:
                raise AutomatonError(f"non-deterministic on ({s},{x!r})")
            seen.add((s, x))

    @cached_property
    def delta(self) -> dict:
        return {(s, x): t for s, x, t in self.transitions}

    @property
    def complete(self) -> bool:
        return len(self.transitions) == self.n_states * len(self.alphabet)

    def dstep(self, s: int, letter):
        return self.delta.get((s, letter))

    def accepts(self, word) -> bool:
        s = self.initial
        for x in word:
            s = self.delta.get((s, x))
            if s is None:
                return False
        return s in self.accepting

    def to_nfa(self) -> Nfa:
        return Nfa(self.alphabet, self.n_states, frozenset({self.initial}),
                   self.transitions, self.accepting, self.names)

    def state_name(self, s: int) -> str:
        return self.names[s] if self.names else f"s{s}"


def eps_eliminate(a: Nfa) -> Nfa:
    """Language-preserving removal of epsilon transitions."""
    if a.epsilon_free:
        return a
    transitions = set()
    accepting = set(a.accepting)
    for s in range(a.n_states):
        cl = a.eps_closure({s})
        if cl & a.accepting:
            accepting.add(s)
        for s2 in cl:
            for (src, x), targets in a._step_map.items():
                if src == s2 and x is not EPS:
                    for t in targets:
                        transitions.add((s, x, t))
    return Nfa(a.alphabet, a.n_states, a.initial, frozenset(transitions),
               frozenset(accepting), a.names)


def determinise(a: Nfa) -> Dfa:
    """Reachable-subset construction; never materialises the full powerset."""
    a = eps_eliminate(a)
    start = a.eps_closure(a.initial)
    index = {start: 0}
    order = [start]
    transitions = set()
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        for x in a.alphabet:
            nxt = a.step(subset, x)
            if not nxt:
                continue
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            transitions.add((index[subset], x, index[nxt]))
    accepting = frozenset(i for subset, i in index.items() if subset & a.accepting)
    names = tuple("{" + ",".join(sorted(a.state_name(s) for s in subset)) + "}"
                  for subset in order)
    return Dfa(a.alphabet, len(order), 0, frozenset(transitions), accepting, names)


def complete(d: Dfa) -> Dfa:
    """Add a sink state if some (state, letter) transition is missing."""
    if d.complete:
        return d
    sink = d.n_states
    transitions = set(d.transitions)
    for s in range(d.n_states + 1):
        for x in d.alphabet:
            if (s, x) not in d.delta or s == sink:
                transitions.add((s, x, sink))
    names = tuple(d.names) + ("sink",) if d.names else None
    return Dfa(d.alphabet, d.n_states + 1, d.initial, frozenset(transitions),
               d.accepting, names)


def dual(d: Dfa) -> Dfa:
    """Complete, then swap accepting and non-accepting states."""
    d = complete(d)
    accepting = frozenset(range(d.n_states)) - d.accepting
    return Dfa(d.alphabet, d.n_states, d.initial, d.transitions, accepting, d.names)


def product(a: Nfa, b: Nfa) -> Nfa:
    """Synchronized product; L(product) = L(a) ∩ L(b)."""
    if tuple(a.alphabet) != tuple(b.alphabet):
        raise AlphabetMismatchError("product requires identical alphabets")
    a = eps_eliminate(a)
    b = eps_eliminate(b)
    start = [(s, t) for s in a.initial for t in b.initial]
    index = {}
    order = []
    for pair in start:
        if pair not in index:
            index[pair] = len(order)
            order.append(pair)
    transitions = set()
    queue = deque(order)
    while queue:
        s, t = queue.popleft()
        for x in a.alphabet:
            for s2 in a._step_map.get((s, x), ()):
                for t2 in b._step_map.get((t, x), ()):
                    pair = (s2, t2)
                    if pair not in index:
                        index[pair] = len(order)
                        order.append(pair)
                        queue.append(pair)
                    transitions.add((index[(s, t)], x, index[pair]))
    if not order:  # one of the initial sets was empty
        return Nfa(a.alphabet, 1, frozenset(), frozenset(), frozenset())
    accepting = frozenset(i for (s, t), i in index.items()
                          if s in a.accepting and t in b.accepting)
    names = tuple(f"({a.state_name(s)},{b.state_name(t)})" for s, t in order)
    initial = frozenset(index[p] for p in start)
    return Nfa(a.alphabet, len(order), initial, frozenset(transitions), accepting, names)


def _distances_to_accepting(a: Nfa) -> dict[int, int]:
    rev: dict[int, set[int]] = {}
    for s, x, t in a.transitions:
        rev.setdefault(t, set()).add(s)
    dist = {s: 0 for s in a.accepting}
    queue = deque(a.accepting)
    while queue:
        t = queue.popleft()
        for s in rev.get(t, ()):
            if s not in dist:
                dist[s] = dist[t] + 1
                queue.append(s)
    return dist


def is_empty(a: Nfa) -> tuple[bool, tuple | None]:
    """Emptiness with a shortest-then-lex-least witness word when non-empty."""
    a = eps_eliminate(a)
    dist = _distances_to_accepting(a)
    start = a.eps_closure(a.initial)
    reachable_dists = [dist[s] for s in start if s in dist]
    if not reachable_dists:
        return True, None
    length = min(reachable_dists)
    word = []
    states = start
    remaining = length
    while remaining > 0:
        for x in a.alphabet:
            nxt = a.step(states, x)
            if any(dist.get(s, remaining) <= remaining - 1 for s in nxt):
                word.append(x)
                states = frozenset(s for s in nxt if dist.get(s, remaining) <= remaining - 1)
                break
        remaining -= 1
    return False, tuple(word)


def includes(a: Nfa, b: Nfa) -> tuple[bool, tuple | None]:
    """L(a) ⊇ L(b)?  Counterexample is a word of L(b) \\ L(a)."""
    comp = dual(determinise(a)).to_nfa()
    empty, witness = is_empty(product(comp, b))
    return empty, witness


def trim(a: Nfa) -> Nfa:
    """Restrict to accessible and co-accessible states."""
    a = eps_eliminate(a)
    fwd = set(a.initial)
    queue = deque(fwd)
    succs: dict[int, set[int]] = {}
    for s, _, t in a.transitions:
        succs.setdefault(s, set()).add(t)
    while queue:
        s = queue.popleft()
        for t in succs.get(s, ()):
            if t not in fwd:
                fwd.add(t)
                queue.append(t)
    back = set(_distances_to_accepting(a))
    keep = sorted(fwd & back)
    if not keep:
        return Nfa(a.alphabet, 1, frozenset({0}), frozenset(), frozenset(),
                   ("dead",))
    renum = {s: i for i, s in enumerate(keep)}
    transitions = frozenset((renum[s], x, renum[t]) for s, x, t in a.transitions
                            if s in renum and t in renum)
    names = tuple(a.state_name(s) for s in keep)
    return Nfa(a.alphabet, len(keep), frozenset(renum[s] for s in a.initial if s in renum),
               transitions, frozenset(renum[s] for s in a.accepting if s in renum), names)


def prefix_closure(a: Nfa) -> Nfa:
    """Automaton for the set of prefixes of L(a): trim, then accept everywhere."""
    t = trim(a)
    if not t.initial:
        return t
    # trim() of an empty language yields a dead non-accepting state; keep it so.
    if not t.accepting and t.n_states == 1 and not t.transitions:
        return t
    return Nfa(t.alphabet, t.n_states, t.initial, t.transitions,
               frozenset(range(t.n_states)), t.names)


def erase_letter(a: Nfa, x) -> Nfa:
    """Homomorphic image erasing letter `x` (its transitions become epsilon)."""
    if x not in set(a.alphabet):
        raise AlphabetMismatchError(f"letter {x!r} not in alphabet")
    transitions = frozenset((s, EPS if y == x else y, t) for s, y, t in a.transitions)
    return Nfa(a.alphabet, a.n_states, a.initial, transitions, a.accepting, a.names)


def minimise(d: Dfa) -> Dfa:
    """Minimal complete DFA for L(d) (Moore partition refinement)."""
    d = complete(d)
    # drop unreachable states first
    reach = {d.initial}
    queue = deque([d.initial])
    while queue:
        s = queue.popleft()
        for x in d.alphabet:
            t = d.delta[(s, x)]
            if t not in reach:
                reach.add(t)
                queue.append(t)
    states = sorted(reach)
    block = {s: (s in d.accepting) for s in states}
    while True:
        sig = {s: (block[s], tuple(block[d.delta[(s, x)]] for x in d.alphabet))
               for s in states}
        classes = {}
        for s in states:
            classes.setdefault(sig[s], len(classes))
        new_block = {s: classes[sig[s]] for s in states}
        if len(set(new_block.values())) == len(set(block.values())):
            block = new_block
            break
        block = new_block
    # canonical numbering: BFS from the initial block, letters in order
    renum = {block[d.initial]: 0}
    order = [d.initial]
    queue = deque([d.initial])
    while queue:
        s = queue.popleft()
        for x in d.alphabet:
            t = d.delta[(s, x)]
            if block[t] not in renum:
                renum[block[t]] = len(renum)
                order.append(t)
                queue.append(t)
    transitions = frozenset((renum[block[s]], x, renum[block[d.delta[(s, x)]]])
                            for s in states for x in d.alphabet)
    accepting = frozenset(renum[block[s]] for s in states if s in d.accepting)
    return Dfa(d.alphabet, len(renum), 0, transitions, accepting)


def words(a: Nfa, max_len: int):
    """Yield every accepted word of length <= max_len (depth-first)."""
    a = eps_eliminate(a)

    def rec(states, prefix):
        if states & a.accepting:
            yield tuple(prefix)
        if len(prefix) == max_len:
            return
        for x in a.alphabet:
            nxt = a.step(states, x)
            if nxt:
                yield from rec(nxt, prefix + [x])

    yield from rec(a.eps_closure(a.initial), [])


def all_accepting(alphabet) -> Nfa:
    """One-state automaton accepting every word over `alphabet`."""
    transitions = frozenset((0, x, 0) for x in alphabet)
    return Nfa(tuple(alphabet), 1, frozenset({0}), transitions, frozenset({0}))
