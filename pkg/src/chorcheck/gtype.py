"""Global types as arrow-automata: classification, projection, membership."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import automata
from .automata import EPS, Nfa, determinise, eps_eliminate
from .semantics import Cfsm, System, local_alphabet, recv_action, send_action
from .trace import Arrow, Declaration, DeclarationError, Msc, commute, minimal_arrows, msc_of


class DeclarationMismatchError(ValueError):
    """Binary operation over global types with different declarations."""


class ClassificationError(ValueError):
    """A procedure's classification precondition does not hold."""


@dataclass(frozen=True)
class GlobalType:
    declaration: Declaration
    automaton: Nfa
    name: str = ""

    def __post_init__(self):
        if tuple(self.automaton.alphabet) != tuple(self.declaration.arrows):
            raise DeclarationError(
                "automaton alphabet must equal the declared arrow alphabet")

    def with_automaton(self, nfa: Nfa, name: str | None = None) -> "GlobalType":
        return GlobalType(self.declaration, nfa, self.name if name is None else name)

    def accepts(self, word) -> bool:
        return self.automaton.accepts(word)


@dataclass(frozen=True)
class Classification:
    deterministic: bool
    commutation_closed: bool
    sender_driven: bool
    commutation_deterministic: bool
    participant_count: int


def choices(g: GlobalType, s: int) -> frozenset[Arrow]:
    """Arrows labelling outgoing transitions of state `s`."""
    if not 0 <= s < g.automaton.n_states:
        raise ValueError(f"unknown state {s}")
    return frozenset(x for src, x, _ in g.automaton.transitions
                     if src == s and x is not EPS)


def is_deterministic(g: GlobalType) -> bool:
    a = g.automaton
    if len(a.initial) != 1 or not a.epsilon_free:
        return False
    seen = set()
    for s, x, _ in a.transitions:
        if (s, x) in seen:
            return False
        seen.add((s, x))
    return True


def is_sender_driven(g: GlobalType) -> bool:
    if not is_deterministic(g):
        return False
    for s in range(g.automaton.n_states):
        senders = {a.sender for a in choices(g, s)}
        if len(senders) > 1:
            return False
    return True


def is_commutation_deterministic(g: GlobalType) -> bool:
    if not is_deterministic(g):
        return False
    for s in range(g.automaton.n_states):
        for a, b in itertools.combinations(choices(g, s), 2):
            if commute(a, b):
                return False
    return True


def participant_count(g: GlobalType) -> int:
    """Processes occurring in the declared arrow alphabet."""
    return len({p for a in g.declaration.arrows for p in (a.sender, a.receiver)})


def _swap_image(a: Nfa, x: Arrow, y: Arrow) -> Nfa:
    """NFA for { u·y·x·v | u·x·y·v ∈ L(a) }."""
    a = eps_eliminate(a)
    n = a.n_states
    # layers: [0, n) = before the swap, [n, 2n) = between y and x, [2n, 3n) = after
    transitions = set()
    for s, z, t in a.transitions:
        transitions.add((s, z, t))
        transitions.add((2 * n + s, z, 2 * n + t))
    for s, z, t in a.transitions:
        if z == x:
            transitions.add((s, y, n + t))      # guess the swap: emit y, remember x-target
    for s, z, t in a.transitions:
        if z == y:
            transitions.add((n + s, x, 2 * n + t))
    accepting = frozenset(2 * n + s for s in a.accepting)
    return Nfa(a.alphabet, 3 * n, a.initial, frozenset(transitions), accepting)


def is_commutation_closed(g: GlobalType) -> tuple[bool, tuple | None]:
    """Is L(g) closed under adjacent swaps of commuting arrows?

    Returns (True, None) or (False, (word_in_language, swapped_word_not_in)).
    Single-swap closure over all ordered pairs implies full trace closure.
    """
    a = eps_eliminate(g.automaton)
    for x, y in itertools.permutations(g.declaration.arrows, 2):
        if not commute(x, y):
            continue
        ok, witness = automata.includes(a, _swap_image(a, x, y))
        if not ok:
            # witness = u·y·x·v ∈ swap image but not in L(g); recover the original
            for i in range(len(witness) - 1):
                if witness[i] == y and witness[i + 1] == x:
                    original = witness[:i] + (x, y) + witness[i + 2:]
                    if a.accepts(original):
                        return False, (original, witness)
            raise AssertionError("swap-image witness without a pre-image")
    return True, None


def classify(g: GlobalType) -> Classification:
    return Classification(
        deterministic=is_deterministic(g),
        commutation_closed=is_commutation_closed(g)[0],
        sender_driven=is_sender_driven(g),
        commutation_deterministic=is_commutation_deterministic(g),
        participant_count=participant_count(g),
    )


# ---------------------------------------------------------------------------
# projection and products


def project(g: GlobalType) -> System:
    """Homomorphic erasure per process, then epsilon elimination and
    determinisation."""
    decl = g.declaration
    cfsms = []
    for p in decl.processes:
        alphabet = local_alphabet(decl, p)
        transitions = set()
        for s, arrow, t in g.automaton.transitions:
            if arrow is EPS:
                transitions.add((s, EPS, t))
            elif arrow.sender == p:
                transitions.add((s, send_action(p, arrow.receiver, arrow.message), t))
            elif arrow.receiver == p:
                transitions.add((s, recv_action(p, arrow.sender, arrow.message), t))
            else:
                transitions.add((s, EPS, t))
        local = Nfa(alphabet, g.automaton.n_states, g.automaton.initial,
                    frozenset(transitions), g.automaton.accepting)
        cfsms.append(Cfsm(p, determinise(local)))
    return System(decl, tuple(cfsms))


def sync_product(system: System, name: str = "") -> GlobalType:
    """Cartesian abstraction: rendezvous product of the CFSMs, over arrows."""
    from .semantics import sync_explore

    graph = sync_explore(system)
    index = {cfg: i for i, cfg in enumerate(graph.configurations)}
    transitions = frozenset((index[src], arrow, index[dst])
                            for src, arrow, dst in graph.edges)
    names = tuple("(" + ",".join(str(x) for x in cfg) + ")"
                  for cfg in graph.configurations)
    nfa = Nfa(system.declaration.arrows, len(index),
              frozenset({index[graph.initial]}), transitions,
              frozenset(index[c] for c in graph.accepting), names)
    return GlobalType(system.declaration, nfa, name)


def gt_product(g: GlobalType, h: GlobalType, name: str = "") -> GlobalType:
    if g.declaration != h.declaration:
        raise DeclarationMismatchError("product requires identical declarations")
    return GlobalType(g.declaration, automata.product(g.automaton, h.automaton), name)


def determinise_gt(g: GlobalType) -> GlobalType:
    return g.with_automaton(determinise(g.automaton).to_nfa())


def dual_gt(g: GlobalType) -> GlobalType:
    """Dual DFA of a deterministic global type (completes first)."""
    if not is_deterministic(g):
        raise ClassificationError("dual requires a deterministic global type")
    d = automata.Dfa(g.automaton.alphabet, g.automaton.n_states,
                     next(iter(g.automaton.initial)), g.automaton.transitions,
                     g.automaton.accepting, g.automaton.names)
    return g.with_automaton(automata.dual(d).to_nfa(),
                            f"dual({g.name})" if g.name else "")


# ---------------------------------------------------------------------------
# MSC-language membership


def member_existential(g: GlobalType, m: Msc) -> bool:
    """Does some linearisation of `m` belong to L(g)?"""
    a = eps_eliminate(g.automaton)
    decl = g.declaration
    memo: dict = {}

    def rec(states: frozenset, word: tuple[Arrow, ...]) -> bool:
        if not word:
            return bool(states & a.accepting)
        key = (states, word)
        if key in memo:
            return memo[key]
        result = False
        trace = Msc(word, decl)
        for arrow in minimal_arrows(trace):
            nxt = a.step(states, arrow)
            if not nxt:
                continue
            i = word.index(arrow)
            rest = msc_of(word[:i] + word[i + 1:], decl).word
            if rec(nxt, rest):
                result = True
                break
        memo[key] = result
        return result

    return rec(a.eps_closure(a.initial), m.word)


def member_universal(g: GlobalType, m: Msc) -> bool:
    """Is every linearisation of `m` in L(g)?"""
    d = determinise_gt(g)
    return not member_existential(dual_gt(d), m)


def member_existential_via_next(g: GlobalType, m: Msc) -> bool:
    """Membership by the next-arrow/next-MSC recursion.

    Valid for commutation-deterministic global types: peel off the first
    choice arrow when it is unblocked, otherwise reject.
    """
    from .trace import next_arrow, next_msc

    if not is_commutation_deterministic(g):
        raise ClassificationError("recursion requires commutation-determinism")
    a = g.automaton
    delta = {(s, x): t for s, x, t in a.transitions}

    def rec(state: int, trace: Msc) -> bool:
        if len(trace) == 0:
            return state in a.accepting
        cs = choices(g, state)
        arrow = next_arrow(trace, cs)
        if arrow is None:
            return False
        rest = next_msc(trace, cs)
        if rest is None:
            return False
        return rec(delta[(state, arrow)], rest)

    return rec(next(iter(a.initial)), m)
