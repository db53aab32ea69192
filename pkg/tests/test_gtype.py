import random

import pytest

from chorcheck.automata import Nfa
from chorcheck.gtype import (ClassificationError, DeclarationMismatchError,
                             GlobalType, choices, classify, determinise_gt,
                             dual_gt, gt_product, is_commutation_closed,
                             is_commutation_deterministic, is_deterministic,
                             is_sender_driven, member_existential,
                             member_existential_via_next, member_universal,
                             participant_count, project, sync_product)
from chorcheck.oracle import (bounded_existential, enumerate_canonical,
                              member_existential_oracle, swap_closure_oracle)
from chorcheck.randomgen import (random_commutation_deterministic,
                                 random_declaration, random_global_type)
from chorcheck.semantics import sync_explore
from chorcheck.trace import Arrow, Declaration, DeclarationError, msc_of


def test_alphabet_must_match_declaration():
    decl = Declaration(("p", "q"), ("m",), (Arrow("p", "q", "m"),))
    bad = Nfa(("x",), 1, frozenset({0}), frozenset(), frozenset())
    with pytest.raises(DeclarationError):
        GlobalType(decl, bad)


def test_classify_g_sd(g_sd):
    c = classify(g_sd)
    assert c.deterministic
    assert c.sender_driven
    assert c.commutation_deterministic
    assert not c.commutation_closed
    assert c.participant_count == 4


def test_classify_g0(g0):
    c = classify(g0)
    assert c.deterministic
    assert c.commutation_closed
    assert not c.sender_driven         # q0 offers both p and r sends
    assert not c.commutation_deterministic
    assert c.participant_count == 4


def test_choices(g_sd, gsd_arrows):
    a1, a2, _, a3, _ = gsd_arrows
    assert choices(g_sd, 0) == {a1, a2}
    assert choices(g_sd, 1) == {a3}
    assert choices(g_sd, 3) == frozenset()
    with pytest.raises(ValueError):
        choices(g_sd, 99)


def test_nondeterministic_not_sender_driven(cross):
    # cross is deterministic; a two-initial variant is not
    a = cross.automaton
    nd = cross.with_automaton(Nfa(a.alphabet, a.n_states, frozenset({0, 1}),
                                  a.transitions, a.accepting))
    assert not is_deterministic(nd)
    assert not is_sender_driven(nd)
    assert not is_commutation_deterministic(nd)


def test_participant_count_uses_arrow_alphabet():
    # a declared process that no arrow mentions does not count
    decl = Declaration(("p", "q", "r"), ("m",), (Arrow("p", "q", "m"),))
    g = GlobalType(decl, Nfa(decl.arrows, 1, frozenset({0}), frozenset(),
                             frozenset({0})))
    assert participant_count(g) == 2


def test_commutation_closure_witness(g0, branch):
    ok, witness = is_commutation_closed(g0)
    assert ok and witness is None
    ok, (orig, swapped) = is_commutation_closed(branch)
    assert not ok
    assert branch.accepts(orig)
    assert not branch.accepts(swapped)


def test_commutation_closure_agrees_with_oracle(fixture_suite):
    for g in fixture_suite.values():
        assert is_commutation_closed(g)[0] == swap_closure_oracle(g, 6)[0]


def test_projection_g_sd_configurations(g_sd):
    # init, after a1, after a2, after a3, after {a1,a3}
    graph = sync_explore(project(g_sd))
    assert len(graph.configurations) == 5


def test_projection_real_chain(real):
    system = project(real)
    p = system.cfsm("p").automaton
    assert p.n_states == 2 and len(p.transitions) == 1


def test_sync_product_language(real):
    prod = sync_product(project(real))
    assert bounded_existential(prod, 4) == bounded_existential(real, 4)


def test_gt_product_mismatch(g0, real):
    with pytest.raises(DeclarationMismatchError):
        gt_product(g0, real)


def test_dual_gt_requires_determinism(cross):
    a = cross.automaton
    nd = cross.with_automaton(Nfa(a.alphabet, a.n_states, frozenset({0, 1}),
                                  a.transitions, a.accepting))
    with pytest.raises(ClassificationError):
        dual_gt(nd)


def test_membership_g_sd(g_sd, gsd_arrows):
    a1, a2, a2p, a3, a4 = gsd_arrows
    d = g_sd.declaration
    M1 = msc_of((a1, a3), d)
    M2 = msc_of((a2,), d)
    assert member_existential(g_sd, M1)
    assert member_existential(g_sd, M2)
    assert not member_existential(g_sd, msc_of((a1,), d))
    # a3 a1 is a linearisation of M1 outside L(g_sd)
    assert not member_universal(g_sd, M1)
    assert member_universal(g_sd, M2)
    assert not member_universal(g_sd, msc_of((a4,), d))


def test_membership_agrees_with_oracle(fixture_suite):
    for g in fixture_suite.values():
        for m in sorted(enumerate_canonical(g.declaration, 3),
                        key=lambda m: (len(m), m.word)):
            assert member_existential(g, m) == member_existential_oracle(g, m)


def test_membership_via_next_requires_cd(g0):
    m = msc_of((), g0.declaration)
    with pytest.raises(ClassificationError):
        member_existential_via_next(g0, m)


def test_membership_via_next_agrees(g_sd, real, single):
    for g in (g_sd, real, single):
        assert is_commutation_deterministic(g)
        for m in enumerate_canonical(g.declaration, 3):
            assert member_existential_via_next(g, m) == member_existential(g, m)


def test_membership_random_cd_types():
    rng = random.Random(5)
    for _ in range(10):
        g = random_commutation_deterministic(rng, max_states=4, max_arrows=3)
        for m in enumerate_canonical(g.declaration, 3):
            assert member_existential_via_next(g, m) == member_existential(g, m)


def test_determinise_gt_preserves_bounded_language():
    rng = random.Random(3)
    decl = random_declaration(rng, 3, 2, 3)
    g = random_global_type(rng, decl, 3, deterministic=False)
    assert bounded_existential(determinise_gt(g), 4) == bounded_existential(g, 4)
