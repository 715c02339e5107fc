"""Ordered tagging rules.

A rule assigns an action to one input item (the focus) when the preceding
items match the left context and the focus plus following items match the
right context. Rules earlier in the list take priority. An optional history
pattern over rule indices further restricts firing to positions where the
previously fired rules' ids match ``I* pi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import regexes as rx
from .alphabet import Alphabet

#: Action label of the injected lowest-priority rule; a real output label,
#: printed as-is.
VACUOUS_ACTION = "-"


@dataclass(frozen=True)
class Rule:
    index: int  # 1-based rank; lower fires first
    left: rx.RegexAst
    focus: frozenset[int]  # single item: one symbol or a symbol class
    right: rx.RegexAst
    action: str
    history: rx.RegexAst | None = None  # over rule indices; None = unrestricted
    is_default: bool = False

    def __post_init__(self):
        if not self.focus:
            raise ValueError("rule focus must be a non-empty symbol set")


@dataclass
class RuleSet:
    rules: list[Rule]
    alphabet: Alphabet
    feature_priority: tuple[str, ...] = ("name", "pos")

    @property
    def n(self) -> int:
        return len(self.rules)

    @property
    def has_default(self) -> bool:
        return bool(self.rules) and self.rules[-1].is_default

    @property
    def actions(self) -> tuple[str, ...]:
        """Distinct action labels in first-use order (the output alphabet)."""
        seen: dict[str, None] = {}
        for rule in self.rules:
            seen.setdefault(rule.action, None)
        return tuple(seen)

    def rule_actions(self) -> tuple[str, ...]:
        """Action label per rule, position i-1 for rule i."""
        return tuple(rule.action for rule in self.rules)

    def action_of(self, index: int) -> str:
        return self.rules[index - 1].action

    def with_rules(self, rules: list[Rule]) -> "RuleSet":
        return RuleSet(rules, self.alphabet, self.feature_priority)


def inject_default_rule(rs: RuleSet) -> RuleSet:
    """Append the universal lowest-priority rule (idempotent).

    The default matches every context (empty left/right context under the
    implicit surrounding ``Sigma*`` of rule matching, focus = the whole
    alphabet, unrestricted history) and emits the vacuous action, so every
    position of every input fires exactly one rule.
    """
    if rs.has_default:
        return rs
    default = Rule(
        index=rs.n + 1,
        left=rx.Empty(),
        focus=frozenset(range(len(rs.alphabet))),
        right=rx.Empty(),
        action=VACUOUS_ACTION,
        history=rx.Star(rx.Any()),
        is_default=True,
    )
    return rs.with_rules([*rs.rules, default])


def reindexed(rules: list[Rule]) -> list[Rule]:
    """Renumber rules 1..n after reordering or insertion."""
    return [
        rule if rule.index == i else replace(rule, index=i)
        for i, rule in enumerate(rules, start=1)
    ]
