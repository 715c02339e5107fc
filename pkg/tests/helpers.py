"""Shared helpers for the test suite: word enumeration, membership oracles,
and a pair-table state-equivalence check independent of the minimizer."""

from __future__ import annotations

import itertools

from bimtag.automata import Dfsa
from bimtag.oracle import PatternSim


def words_up_to(syms, max_len):
    """All words over ``syms`` of length 0..max_len, shortest first."""
    for length in range(max_len + 1):
        yield from itertools.product(syms, repeat=length)


def ast_matches(ast, word) -> bool:
    """Whole-word membership via the position-automaton simulator."""
    return PatternSim(ast).matches_whole(word)


def dfsa_color_at(d: Dfsa, word):
    """(accepted, color of the end state) or None if the run dies."""
    q = d.start
    for sym in word:
        nxt = d.delta[q].get(sym)
        if nxt is None:
            return None
        q = nxt
    return (q in d.finals, None if d.color is None else d.color[q])


def equivalent_states(d: Dfsa, dead_color=object()):
    """Pair-table (marking) algorithm: the set of equivalent state pairs.

    Independent of the Hopcroft implementation; used to cross-check
    minimization. States are compared in the implicitly completed machine,
    respecting colors.
    """
    n = d.n_states
    dead = n

    def color(q):
        if q == dead:
            return dead_color
        return (q in d.finals, None if d.color is None else d.color[q])

    def step(q, sym):
        if q == dead:
            return dead
        return d.delta[q].get(sym, dead)

    distinct = set()
    for p in range(n + 1):
        for q in range(p + 1, n + 1):
            if color(p) != color(q):
                distinct.add((p, q))
    changed = True
    while changed:
        changed = False
        for p in range(n + 1):
            for q in range(p + 1, n + 1):
                if (p, q) in distinct:
                    continue
                for sym in range(d.alphabet_size):
                    a, b = step(p, sym), step(q, sym)
                    if a > b:
                        a, b = b, a
                    if a != b and (a, b) in distinct:
                        distinct.add((p, q))
                        changed = True
                        break
    return {
        (p, q)
        for p in range(n)
        for q in range(p + 1, n)
        if (p, q) not in distinct
    }
