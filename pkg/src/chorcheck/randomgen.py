"""Seeded random instances for the property-based and acceptance tests."""

from __future__ import annotations

import random

from .automata import Nfa
from .gtype import GlobalType, is_commutation_deterministic, project, sync_product
from .trace import Arrow, Declaration, commute


def random_declaration(rng: random.Random, n_processes: int, n_messages: int,
                       n_arrows: int) -> Declaration:
    processes = tuple(f"p{i}" for i in range(n_processes))
    messages = tuple(f"m{i}" for i in range(n_messages))
    candidates = [Arrow(s, r, m) for s in processes for r in processes
                  for m in messages if s != r]
    arrows = rng.sample(candidates, min(n_arrows, len(candidates)))
    return Declaration(processes, messages, tuple(arrows))


def random_global_type(rng: random.Random, decl: Declaration, n_states: int,
                       deterministic: bool = True, density: float = 0.5,
                       name: str = "random") -> GlobalType:
    transitions = set()
    for s in range(n_states):
        for a in decl.arrows:
            if rng.random() < density:
                if deterministic:
                    transitions.add((s, a, rng.randrange(n_states)))
                else:
                    for t in rng.sample(range(n_states),
                                        rng.randint(1, min(2, n_states))):
                        transitions.add((s, a, t))
    accepting = frozenset(s for s in range(n_states) if rng.random() < 0.5)
    if not accepting:
        accepting = frozenset({rng.randrange(n_states)})
    initial = frozenset({0}) if deterministic else frozenset(
        rng.sample(range(n_states), rng.randint(1, min(2, n_states))))
    nfa = Nfa(decl.arrows, n_states, initial, frozenset(transitions), accepting)
    return GlobalType(decl, nfa, name)


def random_commutation_deterministic(rng: random.Random, max_states: int = 5,
                                     max_arrows: int = 4,
                                     name: str = "random-cd") -> GlobalType:
    """Deterministic type where no state offers two commuting arrows."""
    decl = random_declaration(rng, rng.randint(3, 4), rng.randint(2, 3),
                              rng.randint(2, max_arrows))
    n_states = rng.randint(2, max_states)
    transitions = set()
    for s in range(n_states):
        offered: list[Arrow] = []
        for a in rng.sample(decl.arrows, len(decl.arrows)):
            if rng.random() < 0.6 and all(not commute(a, b) for b in offered):
                offered.append(a)
                transitions.add((s, a, rng.randrange(n_states)))
    accepting = frozenset(s for s in range(n_states) if rng.random() < 0.5) \
        or frozenset({n_states - 1})
    nfa = Nfa(decl.arrows, n_states, frozenset({0}), frozenset(transitions),
              accepting)
    g = GlobalType(decl, nfa, name)
    assert is_commutation_deterministic(g)
    return g


def random_three_process_deterministic(rng: random.Random, max_states: int = 4,
                                       name: str = "random-3p") -> GlobalType:
    decl = random_declaration(rng, 3, rng.randint(2, 3), rng.randint(2, 4))
    return random_global_type(rng, decl, rng.randint(2, max_states),
                              deterministic=True, name=name)


def random_commutation_closed(rng: random.Random, decl: Declaration,
                              max_states: int = 3) -> GlobalType:
    """A commutation-closed type over `decl`: the Cartesian abstraction of a
    random type is always commutation-closed."""
    g = random_global_type(rng, decl, rng.randint(2, max_states))
    return sync_product(project(g), name="random-cc")
