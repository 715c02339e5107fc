"""Prefix-set matching: one deterministic pass that reports, at every
position of a word, which of a family of patterns match there.

``build_simult_matcher([b1..bn], k)`` produces an acceptor over the k-symbol
input alphabet plus a state annotation ``tau`` such that after consuming any
prefix ``w``, ``tau(state)`` is exactly ``{ j : w  is in  Sigma* b_j }`` --
i.e. pattern j matches some suffix of the prefix read so far.

Construction: append a fresh end-marker symbol to each pattern, determinize
the acceptor of ``Sigma* (b_1 $_1 | ... | b_n $_n)``, read tau off the marker
transitions, then delete the markers, trim, make every state final and
minimize with tau as the state color. The leading ``Sigma*`` keeps some NFA
state alive on every input, so the finished transition table is total over
the input alphabet on all reachable states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import automata, regexes as rx
from .automata import Dfsa
from .errors import PatternError
from ._kernels import MASK_BITS


def pack_masks(masks: Sequence[int], n_patterns: int) -> np.ndarray:
    """Pack per-state bitmasks into an int64 table, MASK_BITS bits a word."""
    n_words = max(1, -(-n_patterns // MASK_BITS))
    table = np.zeros((len(masks), n_words), dtype=np.int64)
    chunk = (1 << MASK_BITS) - 1
    for q, mask in enumerate(masks):
        for wi in range(n_words):
            table[q, wi] = (mask >> (wi * MASK_BITS)) & chunk
    return table


def mask_to_set(mask: int) -> frozenset[int]:
    """Bitmask to 1-based rule-index set."""
    out = set()
    i = 1
    while mask:
        if mask & 1:
            out.add(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def set_to_mask(indices) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << (i - 1)
    return mask


@dataclass
class SimultMatcher:
    """A deterministic acceptor plus per-state pattern-index sets.

    ``dfsa`` is total over ``0..alphabet_size-1`` on reachable states and has
    every state final. ``tau[q]`` is a bitmask; bit ``j-1`` set means pattern
    ``j`` matches at any prefix that reaches ``q``. ``delta_table`` and
    ``tau_table`` are the dense copies the runtime kernels read.
    """

    dfsa: Dfsa
    tau: tuple[int, ...]
    n_patterns: int
    delta_table: np.ndarray
    tau_table: np.ndarray

    @property
    def n_states(self) -> int:
        return self.dfsa.n_states

    @property
    def n_transitions(self) -> int:
        return self.dfsa.n_transitions

    @property
    def alphabet_size(self) -> int:
        return self.dfsa.alphabet_size

    def tau_set(self, q: int) -> frozenset[int]:
        return mask_to_set(self.tau[q])

    def state_after(self, word: Sequence[int]) -> int:
        q = self.dfsa.start
        for sym in word:
            nxt = self.dfsa.step(q, sym)
            if nxt is None:
                raise PatternError(f"undefined transition from state {q} on symbol {sym}")
            q = nxt
        return q

    def match_positions(self, word: Sequence[int]) -> list[frozenset[int]]:
        """Index sets at positions 0..len(word); entry k covers prefix w[:k]."""
        return [mask_to_set(m) for m in self.match_masks(word)]

    def match_masks(self, word: Sequence[int]) -> list[int]:
        q = self.dfsa.start
        masks = [self.tau[q]]
        for k, sym in enumerate(word, start=1):
            nxt = self.dfsa.step(q, sym)
            if nxt is None:
                raise PatternError(f"undefined transition at position {k}")
            q = nxt
            masks.append(self.tau[q])
        return masks


def attach_tables(dfsa: Dfsa, tau: Sequence[int], n_patterns: int) -> SimultMatcher:
    """Wrap a finished acceptor + tau into a matcher with dense tables."""
    delta = np.full((dfsa.n_states, dfsa.alphabet_size), -1, dtype=np.int32)
    for q, row in enumerate(dfsa.delta):
        for sym, t in row.items():
            delta[q, sym] = t
    return SimultMatcher(
        dfsa=dfsa,
        tau=tuple(tau),
        n_patterns=n_patterns,
        delta_table=delta,
        tau_table=pack_masks(tau, n_patterns),
    )


def build_simult_matcher(
    patterns: Sequence[rx.RegexAst],
    sigma_size: int,
    *,
    minimize: bool = True,
) -> SimultMatcher:
    """Compile patterns ``b_1..b_n`` (1-based indices) into a matcher."""
    if not patterns:
        raise ValueError("need at least one pattern")
    for j, ast in enumerate(patterns, start=1):
        bad = [s for s in rx.symbols_of(ast) if not 0 <= s < sigma_size]
        if bad:
            raise PatternError(
                f"pattern {j} references symbol id(s) {sorted(bad)} outside the alphabet"
            )
    n = len(patterns)
    sigma = range(sigma_size)
    marker = lambda j: sigma_size + (j - 1)  # noqa: E731

    tagged = [
        (j, rx.Concat((rx.Star(rx.Any()), ast, rx.Symbol(marker(j)))))
        for j, ast in enumerate(patterns, start=1)
    ]
    nfa = automata.compile_nfa(tagged, sigma_size + n, universe=sigma)
    det = automata.determinize(nfa)

    # tau off the marker transitions, then drop the markers.
    tau_masks = []
    for q in range(det.n_states):
        mask = 0
        for j in range(1, n + 1):
            t = det.delta[q].get(marker(j))
            if t is not None and t in det.finals:
                mask |= 1 << (j - 1)
        tau_masks.append(mask)
        det.delta[q] = {sym: t for sym, t in det.delta[q].items() if sym < sigma_size}

    det.alphabet_size = sigma_size
    det.finals = set(range(det.n_states))
    det.color = tau_masks
    trimmed = automata.trim(det)
    final = automata.minimize(trimmed) if minimize else trimmed
    return attach_tables(final, list(final.color or []), n)
