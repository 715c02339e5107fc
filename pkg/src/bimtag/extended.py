"""Bimachine extended with match constraints over previously emitted output.

Rules may carry a history pattern over rule indices; a rule is admissible at
position k only if the ids of the rules fired at positions 1..k-1 match
``I* history`` (I = all rule indices). The compiled form adds a third
deterministic automaton over rule ids, run forward in lockstep with the left
pass and advanced on each fired rule, so application stays two linear passes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels, regexes as rx
from .errors import MachineFaultError, PatternError
from .machine import Bimachine, StepTrace, _raise_on_fault, compile_bimachine
from .rules import RuleSet
from .simult import SimultMatcher, build_simult_matcher, mask_to_set


def _history_pattern(ast: rx.RegexAst | None, n: int) -> rx.RegexAst:
    """Map 1-based rule indices to the rule-id symbol universe 0..n-1."""
    if ast is None:
        return rx.Star(rx.Any())

    def shift(node: rx.RegexAst) -> rx.RegexAst:
        if isinstance(node, rx.Symbol):
            if not 1 <= node.sym <= n:
                raise PatternError(
                    f"history pattern references rule {node.sym}, but there are {n} rules"
                )
            return rx.Symbol(node.sym - 1)
        if isinstance(node, rx.Class):
            for i in node.syms:
                if not 1 <= i <= n:
                    raise PatternError(
                        f"history pattern references rule {i}, but there are {n} rules"
                    )
            return rx.Class(frozenset(i - 1 for i in node.syms))
        if isinstance(node, rx.Concat):
            return rx.Concat(tuple(shift(p) for p in node.parts))
        if isinstance(node, rx.Union):
            return rx.Union(tuple(shift(p) for p in node.parts))
        if isinstance(node, rx.Star):
            return rx.Star(shift(node.child))
        if isinstance(node, rx.Plus):
            return rx.Plus(shift(node.child))
        if isinstance(node, rx.Optional):
            return rx.Optional(shift(node.child))
        return node

    return shift(ast)


@dataclass
class ExtendedMachine:
    """A bimachine plus the deterministic matcher over fired-rule history."""

    base: Bimachine
    pi: SimultMatcher

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def alphabet(self):
        return self.base.alphabet

    @property
    def rule_actions(self) -> tuple[str, ...]:
        return self.base.rule_actions

    def action_of(self, index: int) -> str:
        return self.base.rule_actions[index - 1]

    def apply_indices(self, word: Sequence[int]) -> list[int]:
        self.base._check_word(word)
        if not len(word):
            return []
        w = np.asarray(word, dtype=np.int32)
        out = np.empty(len(w), dtype=np.int32)
        _kernels.ACTIVE.select_rules_pi(
            self.base.left.delta_table, self.base.left.tau_table, self.base.left.dfsa.start,
            self.pi.delta_table, self.pi.tau_table, self.pi.dfsa.start,
            self.base.right.delta_table, self.base.right.tau_table, self.base.right.dfsa.start,
            w, out,
        )
        _raise_on_fault(out)
        return out.tolist()

    def apply(self, word: Sequence[int]) -> list[str]:
        return [self.base.rule_actions[r - 1] for r in self.apply_indices(word)]

    def trace(self, word: Sequence[int]) -> list[StepTrace]:
        self.base._check_word(word)
        rights = self.base.right_states(word)
        ql = self.base.left.dfsa.start
        qp = self.pi.dfsa.start
        steps: list[StepTrace] = []
        for k, sym in enumerate(word):
            qr = rights[k]
            lset = mask_to_set(self.base.left.tau[ql])
            pset = mask_to_set(self.pi.tau[qp])
            rset = mask_to_set(self.base.right.tau[qr])
            both = lset & pset & rset
            if not both:
                raise MachineFaultError(
                    f"no rule matches at position {k + 1};"
                    " was inject_default_rule skipped?"
                )
            fired = min(both)
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
                    action=self.base.rule_actions[fired - 1],
                    pi_state=qp,
                    pi_rules=pset,
                )
            )
            nxt_p = self.pi.dfsa.step(qp, fired - 1)
            nxt_l = self.base.left.dfsa.step(ql, sym)
            if nxt_p is None or nxt_l is None:
                raise MachineFaultError(f"missing transition at position {k + 1}")
            qp, ql = nxt_p, nxt_l
        return steps

    def stats(self) -> dict[str, int]:
        out = self.base.stats()
        out["pi_states"] = self.pi.n_states
        out["pi_transitions"] = self.pi.n_transitions
        return out


def compile_extended(rs: RuleSet, *, minimize: bool = True) -> ExtendedMachine:
    """Compile a normalized rule set, including its history patterns."""
    base = compile_bimachine(rs, minimize=minimize)
    n = rs.n
    patterns = [_history_pattern(r.history, n) for r in rs.rules]
    pi = build_simult_matcher(patterns, n, minimize=minimize)
    return ExtendedMachine(base=base, pi=pi)


def extend_trivially(base: Bimachine) -> ExtendedMachine:
    """Wrap a plain bimachine with an unrestricted history matcher; the
    result tags identically to the base machine."""
    n = base.n
    pi = build_simult_matcher([rx.Star(rx.Any())] * n, n)
    return ExtendedMachine(base=base, pi=pi)
