"""Alternative control strategies over a compiled machine.

Priority selection (lowest matching index) is only one way to resolve rule
conflicts. This module exposes the full per-position match sets, and an
N-best beam search over additively scored rules where the score replaces
priority: any rule in the per-position admissible set may fire, the context
and history conditions still apply, and hypotheses are ranked by total score
(ties broken toward the lexicographically smaller index sequence).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import MachineFaultError
from .extended import ExtendedMachine
from .machine import Bimachine
from .rules import RuleSet
from .simult import MASK_BITS, mask_to_set


@dataclass
class ScoredRuleSet:
    """A rule set with one real-valued score per rule (higher is better).

    Probabilities should be passed as log-probabilities; totals are sums.
    """

    rules: RuleSet
    scores: dict[int, float]

    def __post_init__(self):
        missing = [i for i in range(1, self.rules.n + 1) if i not in self.scores]
        if missing:
            raise ValueError(f"scores missing for rule(s) {missing}")


@dataclass(frozen=True)
class Hypothesis:
    """A scored partial action sequence; ``pi_state`` is the history-machine
    state after the fired ids, which is all a continuation depends on."""

    indices: tuple[int, ...]
    pi_state: int
    total: float


@dataclass(frozen=True)
class NBestItem:
    indices: tuple[int, ...]
    actions: tuple[str, ...]
    total: float


def _position_masks(b: Bimachine, word: Sequence[int]) -> list[int]:
    """Per-position intersection of left and right match bitsets."""
    if not len(word):
        return []
    w = np.asarray(word, dtype=np.int32)
    nw = b.left.tau_table.shape[1]
    out = np.empty((len(w), nw), dtype=np.int64)
    _kernels.ACTIVE.match_masks(
        b.left.delta_table, b.left.tau_table, b.left.dfsa.start,
        b.right.delta_table, b.right.tau_table, b.right.dfsa.start,
        w, out,
    )
    masks = []
    for k in range(len(w)):
        if out[k, 0] < 0:
            raise MachineFaultError(f"undefined transition at position {k + 1}")
        mask = 0
        for wi in range(nw):
            mask |= int(out[k, wi]) << (wi * MASK_BITS)
        masks.append(mask)
    return masks


def all_matching_rules(b: Bimachine, word: Sequence[int]) -> list[frozenset[int]]:
    """The full set of rules whose contexts match, per position.

    Every set contains the default rule's index, so none is empty.
    """
    b._check_word(word)
    return [mask_to_set(m) for m in _position_masks(b, word)]


def n_best(
    m: ExtendedMachine,
    scores: ScoredRuleSet | Mapping[int, float],
    word: Sequence[int],
    n_results: int,
) -> list[NBestItem]:
    """Up to ``n_results`` highest-scoring admissible action sequences.

    Exact: hypotheses are merged by history-machine state (left and right
    states are shared by all hypotheses at a position), keeping the
    ``n_results`` best per state, which preserves the global top N. With
    uniform scores and N=1 this reduces to the greedy minimum-index run.
    """
    if n_results < 1:
        raise ValueError("need n_results >= 1")
    score_of = scores.scores if isinstance(scores, ScoredRuleSet) else scores
    m.base._check_word(word)
    masks = _position_masks(m.base, word)

    def rank(h: Hypothesis):
        return (-h.total, h.indices)

    beams: dict[int, list[Hypothesis]] = {
        m.pi.dfsa.start: [Hypothesis((), m.pi.dfsa.start, 0.0)]
    }
    for k, mask in enumerate(masks):
        nxt: dict[int, list[Hypothesis]] = {}
        for qp, hyps in beams.items():
            admissible = mask & m.pi.tau[qp]
            if not admissible:
                raise MachineFaultError(f"no rule admissible at position {k + 1}")
            rest = admissible
            while rest:
                bit = rest & -rest
                rest ^= bit
                r = bit.bit_length()
                qp2 = m.pi.dfsa.step(qp, r - 1)
                if qp2 is None:
                    raise MachineFaultError(
                        f"history machine lacks a transition on rule {r}"
                    )
                for h in hyps:
                    nxt.setdefault(qp2, []).append(
                        Hypothesis(h.indices + (r,), qp2, h.total + score_of[r])
                    )
        beams = {qp: sorted(hyps, key=rank)[:n_results] for qp, hyps in nxt.items()}

    final = sorted((h for hyps in beams.values() for h in hyps), key=rank)
    return [
        NBestItem(
            indices=h.indices,
            actions=tuple(m.rule_actions[r - 1] for r in h.indices),
            total=h.total,
        )
        for h in final[:n_results]
    ]
