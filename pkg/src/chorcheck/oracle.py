"""Brute-force bounded-universe ground truth.

Everything here enumerates: canonical traces over a small arrow alphabet,
bounded existential MSC languages, the xor complement law, and the
count-profile characterisation used by the non-complementability fixture.
These are the oracles the cleverer constructions are tested against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .automata import Nfa, eps_eliminate, words
from .trace import Declaration, Msc, SizeLimitError, is_normal_form, msc_of


DEFAULT_MAX_ARROWS = 8
DEFAULT_MAX_EVENTS = 8
DEFAULT_MEMORY_GUARD = 10**6


def enumerate_canonical(declaration: Declaration, max_events: int,
                        max_arrows: int = DEFAULT_MAX_ARROWS,
                        max_events_limit: int = DEFAULT_MAX_EVENTS,
                        memory_guard: int = DEFAULT_MEMORY_GUARD) -> set[Msc]:
    """All canonical traces with at most `max_events` events.

    Canonical words are grown letter by letter: every prefix of a normal
    form is a normal form, so extensions that break canonicity are pruned
    immediately.
    """
    arrows = declaration.arrows
    if len(arrows) > max_arrows:
        raise SizeLimitError(f"{len(arrows)} arrows exceeds the limit {max_arrows}")
    if max_events > max_events_limit:
        raise SizeLimitError(f"bound {max_events} exceeds the limit {max_events_limit}")
    result = {msc_of((), declaration)}
    frontier = [()]
    for _ in range(max_events):
        nxt = []
        for word in frontier:
            for a in arrows:
                candidate = word + (a,)
                if is_normal_form(candidate, declaration):
                    nxt.append(candidate)
                    result.add(Msc(candidate, declaration))
                    if len(result) > memory_guard:
                        raise SizeLimitError(
                            f"canonical-MSC count exceeds the guard {memory_guard}")
        frontier = nxt
    return result


def bounded_existential(g, max_events: int) -> set[Msc]:
    """{ msc(w) : w in L(g), |w| <= max_events }."""
    decl = g.declaration
    return {msc_of(w, decl) for w in words(g.automaton, max_events)}


def xor_check(g, gbar, max_events: int):
    """Violations of the bounded complement law.

    Returns (universe size, list of (Msc, "both" | "neither")).
    """
    universe = enumerate_canonical(g.declaration, max_events)
    in_g = bounded_existential(g, max_events)
    in_gbar = bounded_existential(gbar, max_events)
    violations = []
    for m in sorted(universe, key=lambda m: (len(m), m.word)):
        if m in in_g and m in in_gbar:
            violations.append((m, "both"))
        elif m not in in_g and m not in in_gbar:
            violations.append((m, "neither"))
    return len(universe), violations


@dataclass
class ProfileReport:
    checked_words: int
    profile_words: int
    violations: list = field(default_factory=list)  # (word, (k1, k2, k3))

    @property
    def passed(self) -> bool:
        return not self.violations


def count_profile_check(language: Nfa, declaration: Declaration, predicate,
                        max_len: int, arrows=None) -> ProfileReport:
    """Check `predicate(k1, k2, k3)` on every accepted block-shaped word.

    A word is block-shaped when its trace equals the trace of
    a1^k1 a2^k2 a3^k3.  The role triple (a1, a2, a3) defaults to the three
    declared arrows ordered by message declaration position.
    """
    if arrows is None:
        midx = {m: i for i, m in enumerate(declaration.messages)}
        arrows = tuple(sorted(declaration.arrows, key=lambda a: midx[a.message]))
    if len(arrows) != 3 or set(arrows) != set(declaration.arrows):
        raise ValueError("count-profile checks need exactly three declared arrows")
    a1, a2, a3 = arrows
    nfa = eps_eliminate(language)
    checked = profiled = 0
    violations = []
    for w in words(nfa, max_len):
        checked += 1
        counts = (w.count(a1), w.count(a2), w.count(a3))
        block = (a1,) * counts[0] + (a2,) * counts[1] + (a3,) * counts[2]
        if msc_of(w, declaration) != msc_of(block, declaration):
            continue
        profiled += 1
        if not predicate(*counts):
            violations.append((w, counts))
    return ProfileReport(checked, profiled, violations)


def swap_closure_oracle(g, max_len: int):
    """Brute-force commutation-closure check on words up to `max_len`.

    Returns (True, None) or (False, (word_in_language, swapped_word_not_in)).
    """
    from .trace import commute

    nfa = eps_eliminate(g.automaton)
    for w in words(nfa, max_len):
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if commute(a, b):
                swapped = w[:i] + (b, a) + w[i + 2:]
                if not nfa.accepts(swapped):
                    return False, (w, swapped)
    return True, None


def member_existential_oracle(g, m: Msc, limit: int = 10) -> bool:
    """Membership by enumerating every linearisation."""
    from .trace import linearisations

    return any(g.automaton.accepts(w) for w in linearisations(m, limit))
