"""Reference protocols used across the test suite and the CLI examples.

`g_sd` reconstructs the sender-driven example with states s0..s3 and the
choice {a1, a2} at s0.  The arrow a3 is picked so that it commutes with a1
but not with a2/a2' (they share the receiver q'), which is the unique
commutation pattern consistent with all the documented renunciation
behaviours of this fixture.
"""

from __future__ import annotations

from .automata import Nfa
from .gtype import GlobalType
from .trace import Arrow, Declaration


def g_sd() -> GlobalType:
    """Sender-driven type: L = {a2, a1·a3} with a1=p->q:m1, a2=p->q':m2,
    a3=r->q':m3; alphabet also declares a2'=p->q':m2' and a4=q->q':m4."""
    decl = Declaration(
        processes=("p", "q", "q'", "r"),
        messages=("m1", "m2", "m2'", "m3", "m4"),
        arrows=(
            Arrow("p", "q", "m1"),      # a1
            Arrow("p", "q'", "m2"),     # a2
            Arrow("p", "q'", "m2'"),    # a2'
            Arrow("r", "q'", "m3"),     # a3
            Arrow("q", "q'", "m4"),     # a4
        ),
    )
    a1, a2, _, a3, _ = gsd_arrows(decl)
    nfa = Nfa(decl.arrows, 4, frozenset({0}),
              frozenset({(0, a1, 1), (0, a2, 2), (1, a3, 3)}),
              frozenset({2, 3}), ("s0", "s1", "s2", "s3"))
    return GlobalType(decl, nfa, "g_sd")


def gsd_arrows(decl: Declaration | None = None):
    """(a1, a2, a2', a3, a4) of the sender-driven fixture."""
    return (Arrow("p", "q", "m1"), Arrow("p", "q'", "m2"),
            Arrow("p", "q'", "m2'"), Arrow("r", "q'", "m3"),
            Arrow("q", "q'", "m4"))


def g0_declaration() -> Declaration:
    return Declaration(
        processes=("p", "q", "r", "s"),
        messages=("m1", "m2", "m3"),
        arrows=(Arrow("p", "q", "m1"), Arrow("r", "s", "m2"),
                Arrow("p", "q", "m3")),
    )


def g0() -> GlobalType:
    """Minimal DFA (plus sink) for (m1+m2)*(m2+m3)*; commutation-closed."""
    decl = g0_declaration()
    # decl.arrows is sorted by declaration position, not input order
    m1, m2, m3 = (Arrow("p", "q", "m1"), Arrow("r", "s", "m2"),
                  Arrow("p", "q", "m3"))
    transitions = frozenset({
        (0, m1, 0), (0, m2, 0), (0, m3, 1),
        (1, m2, 1), (1, m3, 1), (1, m1, 2),
        (2, m1, 2), (2, m2, 2), (2, m3, 2),
    })
    nfa = Nfa(decl.arrows, 3, frozenset({0}), transitions, frozenset({0, 1}),
              ("q0", "q1", "sink"))
    return GlobalType(decl, nfa, "g0")


def branch_language() -> GlobalType:
    """The accepting-branch language m1^+ (m2 m1)^* m3^+ of the
    non-complementable example; every block-shaped trace here has k1 > k2."""
    decl = g0_declaration()
    m1, m2, m3 = (Arrow("p", "q", "m1"), Arrow("r", "s", "m2"),
                  Arrow("p", "q", "m3"))
    transitions = frozenset({
        (0, m1, 1), (1, m1, 1),
        (1, m2, 2), (2, m1, 3), (3, m2, 2),
        (1, m3, 4), (3, m3, 4), (4, m3, 4),
    })
    nfa = Nfa(decl.arrows, 5, frozenset({0}), transitions, frozenset({4}),
              ("u0", "u1", "u2", "u3", "u4"))
    return GlobalType(decl, nfa, "branch")


def real_gt() -> GlobalType:
    """Deadlock-free synch-realisable chain: p->q:a then q->r:b."""
    decl = Declaration(processes=("p", "q", "r"), messages=("a", "b"),
                       arrows=(Arrow("p", "q", "a"), Arrow("q", "r", "b")))
    x, y = decl.arrows
    nfa = Nfa(decl.arrows, 3, frozenset({0}),
              frozenset({(0, x, 1), (1, y, 2)}), frozenset({2}),
              ("s0", "s1", "s2"))
    return GlobalType(decl, nfa, "real")


def nonreal_gt() -> GlobalType:
    """Classic projection counterexample: p chooses p->q:m;r->s:a versus
    p->q:m';r->s:b, and r cannot learn p's choice (CC fails)."""
    decl = Declaration(
        processes=("p", "q", "r", "s"), messages=("m", "m'", "a", "b"),
        arrows=(Arrow("p", "q", "m"), Arrow("p", "q", "m'"),
                Arrow("r", "s", "a"), Arrow("r", "s", "b")))
    pm, pm2, ra, rb = decl.arrows
    nfa = Nfa(decl.arrows, 5, frozenset({0}),
              frozenset({(0, pm, 1), (1, ra, 2), (0, pm2, 3), (3, rb, 4)}),
              frozenset({2, 4}), ("s0", "s1", "s2", "s3", "s4"))
    return GlobalType(decl, nfa, "nonreal")


def deadlock_gt() -> GlobalType:
    """CC holds but the projected product can get stuck.

    p tells q the branch, r tells s the branch, then q closes with s.
    When p and r pick different branches, q waits to send a message s will
    never accept: a reachable, non-co-accessible product state.
    """
    decl = Declaration(
        processes=("p", "q", "r", "s"),
        messages=("m", "m'", "n", "n'", "c", "c'"),
        arrows=(Arrow("p", "q", "m"), Arrow("p", "q", "m'"),
                Arrow("r", "s", "n"), Arrow("r", "s", "n'"),
                Arrow("q", "s", "c"), Arrow("q", "s", "c'")))
    pm, pm2, rn, rn2, qc, qc2 = (
        Arrow("p", "q", "m"), Arrow("p", "q", "m'"), Arrow("r", "s", "n"),
        Arrow("r", "s", "n'"), Arrow("q", "s", "c"), Arrow("q", "s", "c'"))
    nfa = Nfa(decl.arrows, 7, frozenset({0}),
              frozenset({(0, pm, 1), (1, rn, 2), (2, qc, 3),
                         (0, pm2, 4), (4, rn2, 5), (5, qc2, 6)}),
              frozenset({3, 6}), tuple(f"s{i}" for i in range(7)))
    return GlobalType(decl, nfa, "deadlock")


def cross_gt() -> GlobalType:
    """Crossing sends: L = {d·e, e·d} with d=p->q:m, e=q->p:m'.

    Synchronously fine; in p2p both processes can send first, yielding the
    classic non-RSC square.
    """
    decl = Declaration(processes=("p", "q"), messages=("m", "m'"),
                       arrows=(Arrow("p", "q", "m"), Arrow("q", "p", "m'")))
    d, e = decl.arrows
    nfa = Nfa(decl.arrows, 4, frozenset({0}),
              frozenset({(0, d, 1), (1, e, 3), (0, e, 2), (2, d, 3)}),
              frozenset({3}), ("s0", "s1", "s2", "s3"))
    return GlobalType(decl, nfa, "cross")


def single_arrow_gt() -> GlobalType:
    decl = Declaration(processes=("p", "q"), messages=("m",),
                       arrows=(Arrow("p", "q", "m"),))
    (a,) = decl.arrows
    nfa = Nfa(decl.arrows, 2, frozenset({0}), frozenset({(0, a, 1)}),
              frozenset({1}), ("s0", "s1"))
    return GlobalType(decl, nfa, "single")


def all_fixtures() -> dict[str, GlobalType]:
    return {
        g.name: g
        for g in (g_sd(), g0(), branch_language(), real_gt(), nonreal_gt(),
                  deadlock_gt(), cross_gt(), single_arrow_gt())
    }
