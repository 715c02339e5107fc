"""NFA/DFSA algebra: Thompson construction, determinization, minimization.

Machines are over dense symbol ids. DFSAs keep a partial transition function
(no dead-state padding); the machines built for tagging become total over the
input alphabet through the universal default pattern, so nothing here needs
completion except internally in the minimizer.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from . import regexes as rx


@dataclass
class Nfa:
    """Non-deterministic automaton with epsilon moves and tagged finals.

    ``finals`` maps a state to the indices of the patterns it completes.
    """

    n_states: int
    start: int
    alphabet_size: int
    eps: list[list[int]]
    moves: list[dict[int, list[int]]]
    finals: dict[int, frozenset[int]]

    def closure(self, states: Iterable[int]) -> frozenset[int]:
        seen = set(states)
        todo = list(seen)
        while todo:
            q = todo.pop()
            for t in self.eps[q]:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return frozenset(seen)

    def run_tags(self, word: Sequence[int]) -> frozenset[int] | None:
        """Simulate directly; tag set of the accepting patterns, or None."""
        current = self.closure([self.start])
        for sym in word:
            nxt: set[int] = set()
            for q in current:
                nxt.update(self.moves[q].get(sym, ()))
            if not nxt:
                return None
            current = self.closure(nxt)
        tags: set[int] = set()
        accepted = False
        for q in current:
            if q in self.finals:
                accepted = True
                tags.update(self.finals[q])
        return frozenset(tags) if accepted else None


class _NfaBuilder:
    def __init__(self, alphabet_size: int, universe: Sequence[int]):
        self.alphabet_size = alphabet_size
        self.universe = list(universe)
        self.eps: list[list[int]] = []
        self.moves: list[dict[int, list[int]]] = []

    def state(self) -> int:
        self.eps.append([])
        self.moves.append({})
        return len(self.eps) - 1

    def link(self, a: int, b: int):
        self.eps[a].append(b)

    def edge(self, a: int, sym: int, b: int):
        self.moves[a].setdefault(sym, []).append(b)

    def fragment(self, ast: rx.RegexAst) -> tuple[int, int]:
        if isinstance(ast, rx.Empty):
            s = self.state()
            return s, s
        if isinstance(ast, rx.Symbol):
            s, e = self.state(), self.state()
            self.edge(s, ast.sym, e)
            return s, e
        if isinstance(ast, rx.Class):
            s, e = self.state(), self.state()
            for sym in sorted(ast.syms):
                self.edge(s, sym, e)
            return s, e
        if isinstance(ast, rx.Any):
            s, e = self.state(), self.state()
            for sym in self.universe:
                self.edge(s, sym, e)
            return s, e
        if isinstance(ast, rx.Concat):
            start, end = self.fragment(ast.parts[0])
            for part in ast.parts[1:]:
                s2, e2 = self.fragment(part)
                self.link(end, s2)
                end = e2
            return start, end
        if isinstance(ast, rx.Union):
            s, e = self.state(), self.state()
            for part in ast.parts:
                ps, pe = self.fragment(part)
                self.link(s, ps)
                self.link(pe, e)
            return s, e
        if isinstance(ast, rx.Star):
            s, e = self.state(), self.state()
            ps, pe = self.fragment(ast.child)
            self.link(s, ps)
            self.link(s, e)
            self.link(pe, ps)
            self.link(pe, e)
            return s, e
        if isinstance(ast, rx.Plus):
            ps, pe = self.fragment(ast.child)
            e = self.state()
            self.link(pe, ps)
            self.link(pe, e)
            return ps, e
        if isinstance(ast, rx.Optional):
            s, e = self.state(), self.state()
            ps, pe = self.fragment(ast.child)
            self.link(s, ps)
            self.link(pe, e)
            self.link(s, e)
            return s, e
        raise TypeError(f"not a regex node: {ast!r}")


def compile_nfa(
    tagged_patterns: Sequence[tuple[int, rx.RegexAst]],
    alphabet_size: int,
    universe: Sequence[int] | None = None,
) -> Nfa:
    """Thompson-style NFA for the union of the patterns.

    Final states carry the index of the pattern they complete. ``universe``
    is the set of symbol ids that ``.`` expands to; it defaults to the whole
    alphabet and is narrower when auxiliary marker symbols share the range.
    """
    indices = [i for i, _ in tagged_patterns]
    if len(set(indices)) != len(indices):
        raise ValueError("pattern indices must be distinct")
    b = _NfaBuilder(alphabet_size, range(alphabet_size) if universe is None else universe)
    start = b.state()
    finals: dict[int, set[int]] = {}
    for index, ast in tagged_patterns:
        s, e = b.fragment(ast)
        b.link(start, s)
        finals.setdefault(e, set()).add(index)
    return Nfa(
        n_states=len(b.eps),
        start=start,
        alphabet_size=alphabet_size,
        eps=b.eps,
        moves=b.moves,
        finals={q: frozenset(tags) for q, tags in finals.items()},
    )


@dataclass
class Dfsa:
    """Deterministic automaton with a partial transition function.

    ``color`` (when present) annotates every state with a hashable payload
    that minimization must preserve.
    """

    n_states: int
    start: int
    alphabet_size: int
    delta: list[dict[int, int]]
    finals: set[int]
    color: list[Hashable] | None = None

    def step(self, q: int, sym: int) -> int | None:
        return self.delta[q].get(sym)

    @property
    def n_transitions(self) -> int:
        return sum(len(row) for row in self.delta)

    def accepts(self, word: Sequence[int]) -> bool:
        q = self.start
        for sym in word:
            nxt = self.delta[q].get(sym)
            if nxt is None:
                return False
            q = nxt
        return q in self.finals


@dataclass
class RunResult:
    """State path of a DFSA run; ``rejected`` is (position, state, symbol)
    with a 1-based position when a transition was undefined."""

    path: list[int]
    rejected: tuple[int, int, int] | None = None

    @property
    def ok(self) -> bool:
        return self.rejected is None


def run(d: Dfsa, word: Sequence[int]) -> RunResult:
    """Run ``d`` on ``word``; path has |word|+1 states on success."""
    path = [d.start]
    q = d.start
    for k, sym in enumerate(word, start=1):
        nxt = d.delta[q].get(sym)
        if nxt is None:
            return RunResult(path, (k, q, sym))
        q = nxt
        path.append(q)
    return RunResult(path)


def _kernel(nfa: Nfa, states: Iterable[int]) -> frozenset[int]:
    """Closure reduced to its observable members (symbol sources + finals).

    Two closures with the same kernel behave identically, so keying subsets
    on kernels keeps the subset construction small.
    """
    return frozenset(
        q for q in nfa.closure(states) if nfa.moves[q] or q in nfa.finals
    )


def determinize(nfa: Nfa) -> Dfsa:
    """Subset construction; state colors collect the member finals' tags."""
    start_set = _kernel(nfa, [nfa.start])
    ids: dict[frozenset[int], int] = {start_set: 0}
    order = [start_set]
    delta: list[dict[int, int]] = [{}]
    queue = deque([start_set])
    while queue:
        current = queue.popleft()
        ci = ids[current]
        moves: dict[int, set[int]] = {}
        for q in current:
            for sym, targets in nfa.moves[q].items():
                moves.setdefault(sym, set()).update(targets)
        for sym in sorted(moves):
            target = _kernel(nfa, moves[sym])
            ti = ids.get(target)
            if ti is None:
                ti = len(order)
                ids[target] = ti
                order.append(target)
                delta.append({})
                queue.append(target)
            delta[ci][sym] = ti
    finals = set()
    color: list[Hashable] = []
    for i, subset in enumerate(order):
        tags: set[int] = set()
        final = False
        for q in subset:
            if q in nfa.finals:
                final = True
                tags.update(nfa.finals[q])
        if final:
            finals.add(i)
        color.append(frozenset(tags))
    return Dfsa(
        n_states=len(order),
        start=0,
        alphabet_size=nfa.alphabet_size,
        delta=delta,
        finals=finals,
        color=color,
    )


def trim(d: Dfsa) -> Dfsa:
    """Drop states unreachable from the start, renumbering in BFS order."""
    remap = {d.start: 0}
    order = [d.start]
    queue = deque([d.start])
    while queue:
        q = queue.popleft()
        for sym in sorted(d.delta[q]):
            t = d.delta[q][sym]
            if t not in remap:
                remap[t] = len(order)
                order.append(t)
                queue.append(t)
    delta = [{sym: remap[t] for sym, t in d.delta[q].items()} for q in order]
    return Dfsa(
        n_states=len(order),
        start=0,
        alphabet_size=d.alphabet_size,
        delta=delta,
        finals={remap[q] for q in d.finals if q in remap},
        color=None if d.color is None else [d.color[q] for q in order],
    )


_DEAD_KEY = object()  # partition key of the synthetic sink, never merged


def minimize(d: Dfsa) -> Dfsa:
    """Hopcroft partition refinement preserving finality and state colors.

    The initial partition separates states by (final?, color), so two states
    merge only if they accept the same language and expose the same color
    along every word. Partiality is preserved: internally the machine is
    completed with a sink that never joins a real block, and edges into the
    sink's block are dropped again on rebuild.
    """
    d = trim(d)
    n = d.n_states
    dead = n
    syms = range(d.alphabet_size)

    def key(q: int) -> Hashable:
        if q == dead:
            return _DEAD_KEY
        return (q in d.finals, None if d.color is None else d.color[q])

    # Initial blocks by key.
    by_key: dict[Hashable, set[int]] = {}
    for q in range(n + 1):
        by_key.setdefault(key(q), set()).add(q)
    blocks: list[set[int]] = list(by_key.values())
    block_of = [0] * (n + 1)
    for bi, block in enumerate(blocks):
        for q in block:
            block_of[q] = bi

    # Reverse edges of the completed machine.
    preimage: list[dict[int, list[int]]] = [dict() for _ in range(n + 1)]
    for q in range(n + 1):
        for sym in syms:
            t = dead if q == dead else d.delta[q].get(sym, dead)
            preimage[t].setdefault(sym, []).append(q)

    worklist = deque(range(len(blocks)))
    queued = set(worklist)
    while worklist:
        ai = worklist.popleft()
        queued.discard(ai)
        splitter = list(blocks[ai])
        for sym in syms:
            x: set[int] = set()
            for t in splitter:
                x.update(preimage[t].get(sym, ()))
            if not x:
                continue
            touched = {block_of[q] for q in x}
            for bi in touched:
                block = blocks[bi]
                inside = block & x
                if not inside or len(inside) == len(block):
                    continue
                outside = block - inside
                blocks[bi] = inside
                ni = len(blocks)
                blocks.append(outside)
                for q in outside:
                    block_of[q] = ni
                if bi in queued:
                    worklist.append(ni)
                    queued.add(ni)
                else:
                    smaller = ni if len(outside) <= len(inside) else bi
                    worklist.append(smaller)
                    queued.add(smaller)

    # Rebuild from the start block, skipping edges into the sink's block.
    dead_block = block_of[dead]
    remap: dict[int, int] = {block_of[d.start]: 0}
    order = [block_of[d.start]]
    queue = deque(order)
    delta: list[dict[int, int]] = [{}]
    reps = {bi: min(b) for bi, b in enumerate(blocks) if b}
    while queue:
        bi = queue.popleft()
        mi = remap[bi]
        rep = reps[bi]
        for sym in sorted(d.delta[rep]):
            ti = block_of[d.delta[rep][sym]]
            if ti == dead_block:
                continue
            if ti not in remap:
                remap[ti] = len(order)
                order.append(ti)
                delta.append({})
                queue.append(ti)
            delta[mi][sym] = remap[ti]
    finals = set()
    color: list[Hashable] | None = [] if d.color is not None else None
    for bi in order:
        rep = reps[bi]
        if rep in d.finals:
            finals.add(remap[bi])
        if color is not None:
            color.append(d.color[rep])
    return Dfsa(
        n_states=len(order),
        start=0,
        alphabet_size=d.alphabet_size,
        delta=delta,
        finals=finals,
        color=color,
    )
