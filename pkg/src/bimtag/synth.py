"""Seeded random grammar and word generation.

Used by the CLI for scaling experiments without any proprietary rule set,
and by the test suite to drive differential testing against the brute-force
reference. Generation is fully determined by the seed.
"""

from __future__ import annotations

import random
from typing import Sequence

from . import regexes as rx
from .alphabet import DEFAULT_SYMBOL, Alphabet
from .rules import Rule, RuleSet


def random_regex(
    rng: random.Random,
    syms: Sequence[int],
    max_depth: int = 3,
    *,
    allow_empty: bool = True,
) -> rx.RegexAst:
    """A small random pattern over the given symbol ids."""
    if allow_empty and rng.random() < 0.15:
        return rx.Empty()
    return _node(rng, syms, max_depth)


def _node(rng: random.Random, syms: Sequence[int], depth: int) -> rx.RegexAst:
    leaf_weight = 1.0 if depth <= 0 else 0.45
    roll = rng.random()
    if roll < leaf_weight:
        kind = rng.random()
        if kind < 0.6 or len(syms) < 2:
            return rx.Symbol(rng.choice(syms))
        if kind < 0.85:
            k = rng.randint(2, min(3, len(syms)))
            return rx.Class(frozenset(rng.sample(list(syms), k)))
        return rx.Any()
    roll = rng.random()
    if roll < 0.35:
        parts = tuple(_node(rng, syms, depth - 1) for _ in range(rng.randint(2, 3)))
        return rx.Concat(parts)
    if roll < 0.6:
        parts = tuple(_node(rng, syms, depth - 1) for _ in range(2))
        return rx.Union(parts)
    child = _node(rng, syms, depth - 1)
    pick = rng.random()
    if pick < 0.5:
        return rx.Star(child)
    if pick < 0.75:
        return rx.Plus(child)
    return rx.Optional(child)


def random_history(rng: random.Random, n_rules: int) -> rx.RegexAst:
    """A random pattern over rule indices 1..n_rules (1-based symbols)."""
    return _node(rng, range(1, n_rules + 1), 2)


def random_ruleset(
    rng: random.Random,
    n_rules: int,
    sigma_size: int,
    *,
    with_history: bool = False,
    max_depth: int = 3,
) -> RuleSet:
    """A random plain-token rule set (not yet carrying the default rule).

    Symbols are ``s0..s{sigma_size-1}`` after the reserved default symbol;
    actions are ``X1..Xn`` so every rule's firing is observable.
    """
    alphabet = Alphabet([DEFAULT_SYMBOL] + [f"s{i}" for i in range(sigma_size)])
    syms = list(range(1, sigma_size + 1))
    rules = []
    for i in range(1, n_rules + 1):
        n_focus = 1 if rng.random() < 0.8 else rng.randint(2, min(3, len(syms)))
        focus = frozenset(rng.sample(syms, n_focus))
        history = None
        if with_history and rng.random() < 0.7:
            history = random_history(rng, n_rules)
        rules.append(
            Rule(
                index=i,
                left=random_regex(rng, syms, max_depth),
                focus=focus,
                right=random_regex(rng, syms, max_depth),
                action=f"X{i}",
                history=history,
            )
        )
    return RuleSet(rules, alphabet, ("name", "pos"))


def random_word(rng: random.Random, sigma_size: int, max_len: int) -> list[int]:
    """A random word over ids 1..sigma_size (excluding the default symbol)."""
    return [rng.randint(1, sigma_size) for _ in range(rng.randint(0, max_len))]


def random_scores(rng: random.Random, n_rules: int) -> dict[int, float]:
    """Scores for every rule index, default included, drawn from a small
    grid so score ties actually occur."""
    return {i: rng.choice((-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)) for i in range(1, n_rules + 1)}


def random_stream(rng: random.Random, sigma_size: int, length: int) -> list[int]:
    return [rng.randint(1, sigma_size) for _ in range(length)]
