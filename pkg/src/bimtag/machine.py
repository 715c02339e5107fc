"""Compile a rule set into a bimachine and apply it in two passes.

The compiled machine is a left-to-right matcher over the rules' left
contexts, a right-to-left matcher over the reversed focus+right contexts,
and the per-rule action table. Tagging runs the right matcher once over the
reversed input, then sweeps forward: at each position the firing rule is the
minimum of the intersection of the two matchers' index sets, which realizes
the priority semantics (lowest index wins, default rule last).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels, regexes as rx
from .alphabet import Alphabet
from .errors import MachineFaultError, PatternError
from .rules import RuleSet
from .simult import SimultMatcher, build_simult_matcher, mask_to_set


@dataclass
class StepTrace:
    """One position of a traced run (states are those consulted there)."""

    position: int  # 1-based
    symbol: int
    left_state: int
    right_state: int
    left_rules: frozenset[int]
    right_rules: frozenset[int]
    matching: frozenset[int]
    fired: int
    action: str
    pi_state: int | None = None
    pi_rules: frozenset[int] | None = None


@dataclass
class Bimachine:
    """Immutable compiled tagger; safe to share across threads."""

    left: SimultMatcher
    right: SimultMatcher
    rule_actions: tuple[str, ...]  # label of rule i at position i-1
    alphabet: Alphabet
    feature_priority: tuple[str, ...] = ("name", "pos")

    @property
    def n(self) -> int:
        return len(self.rule_actions)

    @property
    def actions(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for a in self.rule_actions:
            seen.setdefault(a, None)
        return tuple(seen)

    def action_of(self, index: int) -> str:
        return self.rule_actions[index - 1]

    def _check_word(self, word: Sequence[int]):
        size = len(self.alphabet)
        for k, sym in enumerate(word, start=1):
            if not 0 <= sym < size:
                raise PatternError(f"symbol id {sym} at position {k} outside the alphabet")

    def apply_indices(self, word: Sequence[int]) -> list[int]:
        """Fired rule index per position (same length as the input)."""
        self._check_word(word)
        if not len(word):
            return []
        w = np.asarray(word, dtype=np.int32)
        out = np.empty(len(w), dtype=np.int32)
        _kernels.ACTIVE.select_rules(
            self.left.delta_table, self.left.tau_table, self.left.dfsa.start,
            self.right.delta_table, self.right.tau_table, self.right.dfsa.start,
            w, out,
        )
        _raise_on_fault(out)
        return out.tolist()

    def apply(self, word: Sequence[int]) -> list[str]:
        """Action label per position."""
        return [self.rule_actions[r - 1] for r in self.apply_indices(word)]

    def right_states(self, word: Sequence[int]) -> list[int]:
        """Right-pass states; entry k is the state after consuming word[k:]
        from the right (entry len(word) is the right start state)."""
        w = np.asarray(word, dtype=np.int32)
        path = _kernels.PY_KERNELS.right_state_path(
            self.right.delta_table, self.right.dfsa.start, w
        )
        if (path < 0).any():
            k = int(np.nonzero(path < 0)[0][-1])
            raise MachineFaultError(f"right pass has no transition covering position {k + 1}")
        return path.tolist()

    def g_index(self, left_state: int, right_state: int) -> int:
        """Firing rule for a (left, right) state pair; the right state is the
        one that has already consumed the focus item."""
        mask = self.left.tau[left_state] & self.right.tau[right_state]
        if not mask:
            raise MachineFaultError(
                "empty rule intersection; was inject_default_rule skipped?"
            )
        return (mask & -mask).bit_length()

    def h_index(self, left_state: int, symbol: int, right_state: int) -> int:
        """Firing rule given the right state *before* it consumes ``symbol``;
        equals ``g_index(left_state, step(right_state, symbol))``."""
        nxt = self.right.dfsa.step(right_state, symbol)
        if nxt is None:
            raise MachineFaultError(
                f"right automaton lacks a transition on symbol {symbol}"
            )
        mask = self.left.tau[left_state] & self.right.tau[nxt]
        if not mask:
            raise MachineFaultError(
                "empty rule intersection; was inject_default_rule skipped?"
            )
        return (mask & -mask).bit_length()

    def output_g(self, left_state: int, right_state: int) -> str:
        return self.rule_actions[self.g_index(left_state, right_state) - 1]

    def output_h(self, left_state: int, symbol: int, right_state: int) -> str:
        return self.rule_actions[self.h_index(left_state, symbol, right_state) - 1]

    def trace(self, word: Sequence[int]) -> list[StepTrace]:
        """Replay of :meth:`apply` keeping every intermediate value."""
        self._check_word(word)
        rights = self.right_states(word)
        ql = self.left.dfsa.start
        steps: list[StepTrace] = []
        for k, sym in enumerate(word):
            qr = rights[k]
            lset = mask_to_set(self.left.tau[ql])
            rset = mask_to_set(self.right.tau[qr])
            both = lset & rset
            fired = self.g_index(ql, qr)
            steps.append(
                StepTrace(
                    position=k + 1,
                    symbol=sym,
                    left_state=ql,
                    right_state=qr,
                    left_rules=lset,
                    right_rules=rset,
                    matching=both,
                    fired=fired,
                    action=self.rule_actions[fired - 1],
                )
            )
            nxt = self.left.dfsa.step(ql, sym)
            if nxt is None:
                raise MachineFaultError(f"left pass has no transition at position {k + 1}")
            ql = nxt
        return steps

    def stats(self) -> dict[str, int]:
        return {
            "left_states": self.left.n_states,
            "left_transitions": self.left.n_transitions,
            "right_states": self.right.n_states,
            "right_transitions": self.right.n_transitions,
        }


def _raise_on_fault(out: np.ndarray):
    bad = np.nonzero(out <= 0)[0]
    if len(bad):
        k = int(bad[0])
        if out[k] < 0:
            raise MachineFaultError(f"undefined transition at position {k + 1}")
        raise MachineFaultError(
            f"no rule matches at position {k + 1}; was inject_default_rule skipped?"
        )


def right_pattern(rule) -> rx.RegexAst:
    """Reversed focus+right-context pattern fed to the right matcher."""
    return rx.reverse(rx.Concat((rx.Class(rule.focus), rule.right)))


def compile_bimachine(rs: RuleSet, *, minimize: bool = True) -> Bimachine:
    """Compile a normalized rule set (default rule injected) into a machine."""
    if not rs.has_default:
        raise ValueError("rule set has no default rule; call inject_default_rule first")
    sigma = len(rs.alphabet)
    left = build_simult_matcher([r.left for r in rs.rules], sigma, minimize=minimize)
    right = build_simult_matcher(
        [right_pattern(r) for r in rs.rules], sigma, minimize=minimize
    )
    return Bimachine(
        left=left,
        right=right,
        rule_actions=rs.rule_actions(),
        alphabet=rs.alphabet,
        feature_priority=rs.feature_priority,
    )
