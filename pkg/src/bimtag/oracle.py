"""Naive reference implementations of the rule semantics.

Everything here evaluates the firing conditions directly, position by
position, with a Glushkov position-automaton simulation of each pattern --
no determinization, no sharing with the compiled machines. It exists for
differential testing and is exponential-ish by design; do not use it to tag
real streams.

Firing conditions for rule ``R_i`` at position k of ``s_1..s_t``:

(a) no rule with a smaller index fires at k (priority selection only);
(b) ``s_1..s_{k-1}`` matches ``Sigma* left_i``;
(c) ``s_k..s_t`` matches ``focus_i right_i Sigma*``;
(d) the fired ids ``r_1..r_{k-1}`` match ``I* history_i`` (when histories
    are in play).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import regexes as rx
from .rules import RuleSet

_ANY = -1  # occurrence symbol wildcard


class PatternSim:
    """Glushkov position automaton of one pattern, simulated on demand.

    States are leaf occurrences of the pattern (plus "nothing consumed");
    no epsilon transitions exist, so stepping is a direct set map. The
    simulation state is the frozenset of occurrences that the consumed text
    could end at.
    """

    def __init__(self, ast: rx.RegexAst):
        self.syms: list[int | frozenset[int]] = []
        self.nullable, self.first, self.last, self.follow = self._build(ast)

    def _leaf(self, payload) -> int:
        self.syms.append(payload)
        return len(self.syms) - 1

    def _build(self, ast):
        follow: dict[int, set[int]] = {}

        def go(node) -> tuple[bool, frozenset[int], frozenset[int]]:
            if isinstance(node, rx.Empty):
                return True, frozenset(), frozenset()
            if isinstance(node, rx.Symbol):
                p = self._leaf(node.sym)
                return False, frozenset((p,)), frozenset((p,))
            if isinstance(node, rx.Class):
                p = self._leaf(node.syms)
                return False, frozenset((p,)), frozenset((p,))
            if isinstance(node, rx.Any):
                p = self._leaf(_ANY)
                return False, frozenset((p,)), frozenset((p,))
            if isinstance(node, rx.Concat):
                nullable, first, last = go(node.parts[0])
                for part in node.parts[1:]:
                    pn, pf, pl = go(part)
                    for q in last:
                        follow.setdefault(q, set()).update(pf)
                    first = first | pf if nullable else first
                    last = last | pl if pn else pl
                    nullable = nullable and pn
                return nullable, first, last
            if isinstance(node, rx.Union):
                nullable, first, last = False, set(), set()
                for part in node.parts:
                    pn, pf, pl = go(part)
                    nullable = nullable or pn
                    first |= pf
                    last |= pl
                return nullable, frozenset(first), frozenset(last)
            if isinstance(node, (rx.Star, rx.Plus)):
                pn, pf, pl = go(node.child)
                for q in pl:
                    follow.setdefault(q, set()).update(pf)
                return isinstance(node, rx.Star) or pn, pf, pl
            if isinstance(node, rx.Optional):
                pn, pf, pl = go(node.child)
                return True, pf, pl
            raise TypeError(f"not a regex node: {node!r}")

        nullable, first, last = go(ast)
        return nullable, first, last, {q: frozenset(t) for q, t in follow.items()}

    def _can_consume(self, occ: int, sym: int) -> bool:
        want = self.syms[occ]
        if want == _ANY:
            return True
        if isinstance(want, frozenset):
            return sym in want
        return want == sym

    def start_state(self) -> frozenset[int]:
        return frozenset()

    def step(self, state: frozenset[int], sym: int, *, inject_start: bool) -> frozenset[int]:
        """Advance by one symbol; with ``inject_start`` a fresh match may
        also begin at this symbol (used for suffix-match semantics and for
        the very first step of a prefix match)."""
        sources: set[int] = set()
        for occ in state:
            sources.update(self.follow.get(occ, ()))
        if inject_start:
            sources.update(self.first)
        return frozenset(occ for occ in sources if self._can_consume(occ, sym))

    def accepting(self, state: frozenset[int]) -> bool:
        return bool(state & self.last)

    def some_suffix_matches(self, seq: Sequence[int]) -> bool:
        """Does the pattern match any suffix of ``seq`` (including the empty
        one when the pattern is nullable)?"""
        return self.suffix_match_flags(seq)[len(seq)]

    def suffix_match_flags(self, seq: Sequence[int]) -> list[bool]:
        """Entry k: does the pattern match some suffix of ``seq[:k]``?"""
        flags = [self.nullable]
        state = self.start_state()
        for sym in seq:
            state = self.step(state, sym, inject_start=True)
            flags.append(self.nullable or self.accepting(state))
        return flags

    def some_prefix_matches(self, seq: Sequence[int], start: int) -> bool:
        """Does the pattern match ``seq[start:e]`` for some e?"""
        if self.nullable:
            return True
        state = self.start_state()
        for j, sym in enumerate(seq[start:]):
            state = self.step(state, sym, inject_start=(j == 0))
            if self.accepting(state):
                return True
            if not state:
                return False
        return False

    def matches_whole(self, seq: Sequence[int]) -> bool:
        """Does the pattern match exactly ``seq``?"""
        if not len(seq):
            return self.nullable
        state = self.start_state()
        for j, sym in enumerate(seq):
            state = self.step(state, sym, inject_start=(j == 0))
            if not state:
                return False
        return self.accepting(state)


@dataclass
class _RulePatterns:
    left: PatternSim
    focus: frozenset[int]
    right: PatternSim
    history: PatternSim | None


def _prepare(rs: RuleSet) -> list[_RulePatterns]:
    return [
        _RulePatterns(
            left=PatternSim(r.left),
            focus=r.focus,
            right=PatternSim(r.right),
            history=None if r.history is None else PatternSim(r.history),
        )
        for r in rs.rules
    ]


def _context_match_sets(rs: RuleSet, word: Sequence[int]) -> list[set[int]]:
    """Rules satisfying (b) and (c) at each position (0-based list)."""
    prepared = _prepare(rs)
    left_flags = [p.left.suffix_match_flags(word) for p in prepared]
    sets: list[set[int]] = []
    for k in range(len(word)):
        matching = set()
        for i, p in enumerate(prepared, start=1):
            if word[k] not in p.focus:
                continue
            if not left_flags[i - 1][k]:
                continue
            if p.right.some_prefix_matches(word, k + 1):
                matching.add(i)
        sets.append(matching)
    return sets


def oracle_match_sets(rs: RuleSet, word: Sequence[int]) -> list[frozenset[int]]:
    """All rules whose contexts match, per position; conditions (b) and (c)."""
    return [frozenset(s) for s in _context_match_sets(rs, word)]


def oracle_tag(rs: RuleSet, word: Sequence[int]) -> list[int]:
    """Fired rule per position under priority selection; (a) with (b), (c)."""
    return [min(s) for s in _context_match_sets(rs, word)]


def oracle_extended(rs: RuleSet, word: Sequence[int]) -> list[int]:
    """Left-to-right firing under (a)-(d), tracking the fired-id history."""
    prepared = _prepare(rs)
    context = _context_match_sets(rs, word)
    history: list[int] = []
    fired: list[int] = []
    for k in range(len(word)):
        candidates = [
            i
            for i in sorted(context[k])
            if prepared[i - 1].history is None
            or prepared[i - 1].history.some_suffix_matches(history)
        ]
        if not candidates:
            raise ValueError(f"no rule admissible at position {k + 1}")
        fired.append(candidates[0])
        history.append(candidates[0])
    return fired


def oracle_best_sequences(
    rs: RuleSet,
    scores: dict[int, float],
    word: Sequence[int],
    n_results: int,
    *,
    guard: int = 10**6,
) -> list[tuple[tuple[int, ...], float]]:
    """Top-N admissible sequences by exhaustive enumeration.

    Admissibility drops (a): any rule satisfying (b), (c), (d) may fire.
    Ranking is by total score descending, then lexicographically smaller
    index sequence. Totals are summed left to right.
    """
    t = len(word)
    if rs.n**max(t, 1) > guard:
        raise ValueError(f"enumeration of {rs.n}^{t} sequences exceeds the guard")
    prepared = _prepare(rs)
    context = _context_match_sets(rs, word)
    results: list[tuple[tuple[int, ...], float]] = []

    def extend(k: int, history: list[int], total: float):
        if k == t:
            results.append((tuple(history), total))
            return
        for i in sorted(context[k]):
            hist_pat = prepared[i - 1].history
            if hist_pat is None or hist_pat.some_suffix_matches(history):
                history.append(i)
                extend(k + 1, history, total + scores[i])
                history.pop()

    extend(0, [], 0.0)
    results.sort(key=lambda item: (-item[1], item[0]))
    return results[:n_results]
