"""Versioned text format for compiled machines.

Layout (one section per component, integers space-separated)::

    BIM 1
    SIGMA <k>            # k symbol names, one per line, id = line order
    PRIORITY <f1> <f2>   # feature lookup order (optional on load)
    ACTIONS <n>          # action label of rule i on line i
    LEFT <states> <start>
    <q> <sym> <q'>       # transitions, sorted
    TAU <q> <j1> <j2> .. # match set of every state, ascending q
    RIGHT <states> <start>
    ...
    PI <states> <start>  # only for machines with history patterns
    ...

Round-trips are exact: transitions, match sets and labels are written and
reconstructed verbatim, so a loaded machine tags identically to the saved
one.
"""

from __future__ import annotations

import io
from pathlib import Path

from .alphabet import Alphabet
from .automata import Dfsa
from .errors import MachineFileError
from .extended import ExtendedMachine
from .machine import Bimachine
from .simult import SimultMatcher, attach_tables, set_to_mask

FORMAT_HEADER = "BIM 1"


def _write_matcher(out: io.StringIO, keyword: str, m: SimultMatcher):
    out.write(f"{keyword} {m.n_states} {m.dfsa.start}\n")
    for q in range(m.n_states):
        for sym in sorted(m.dfsa.delta[q]):
            out.write(f"{q} {sym} {m.dfsa.delta[q][sym]}\n")
    for q in range(m.n_states):
        indices = " ".join(str(j) for j in sorted(m.tau_set(q)))
        out.write(f"TAU {q} {indices}".rstrip() + "\n")


def dump_machine(machine: Bimachine | ExtendedMachine) -> str:
    base = machine.base if isinstance(machine, ExtendedMachine) else machine
    out = io.StringIO()
    out.write(FORMAT_HEADER + "\n")
    out.write(f"SIGMA {len(base.alphabet)}\n")
    for name in base.alphabet:
        out.write(name + "\n")
    out.write("PRIORITY " + " ".join(base.feature_priority) + "\n")
    out.write(f"ACTIONS {base.n}\n")
    for label in base.rule_actions:
        out.write(label + "\n")
    _write_matcher(out, "LEFT", base.left)
    _write_matcher(out, "RIGHT", base.right)
    if isinstance(machine, ExtendedMachine):
        _write_matcher(out, "PI", machine.pi)
    return out.getvalue()


def save_machine(machine: Bimachine | ExtendedMachine, path: str | Path):
    Path(path).write_text(dump_machine(machine), encoding="utf-8")


class _Reader:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.i = 0

    def peek(self) -> str | None:
        return self.lines[self.i] if self.i < len(self.lines) else None

    def next(self, section: str) -> str:
        line = self.peek()
        if line is None:
            raise MachineFileError("file ends early", section)
        self.i += 1
        return line


def _read_matcher(r: _Reader, keyword: str, alphabet_size: int, n_rules: int) -> SimultMatcher:
    header = r.next(keyword).split()
    if len(header) != 3 or header[0] != keyword:
        raise MachineFileError(f"expected '{keyword} <states> <start>'", keyword)
    try:
        n_states, start = int(header[1]), int(header[2])
    except ValueError as exc:
        raise MachineFileError(str(exc), keyword) from exc
    if n_states < 1 or not 0 <= start < n_states:
        raise MachineFileError("bad state count or start state", keyword)
    delta: list[dict[int, int]] = [{} for _ in range(n_states)]
    tau = [None] * n_states
    tau_seen = 0
    while True:
        line = r.peek()
        if line is None:
            break
        fields = line.split()
        if not fields:
            r.next(keyword)
            continue
        if fields[0] == "TAU":
            r.next(keyword)
            try:
                q = int(fields[1])
                indices = [int(x) for x in fields[2:]]
            except (IndexError, ValueError) as exc:
                raise MachineFileError(f"bad TAU line '{line}'", keyword) from exc
            if not 0 <= q < n_states or tau[q] is not None:
                raise MachineFileError(f"bad or repeated TAU state {q}", keyword)
            if any(not 1 <= j <= n_rules for j in indices):
                raise MachineFileError(f"TAU index outside 1..{n_rules}", keyword)
            tau[q] = set_to_mask(indices)
            tau_seen += 1
        elif fields[0].lstrip("-").isdigit():
            r.next(keyword)
            try:
                q, sym, t = (int(x) for x in fields)
            except ValueError as exc:
                raise MachineFileError(f"bad transition line '{line}'", keyword) from exc
            if not (0 <= q < n_states and 0 <= t < n_states and 0 <= sym < alphabet_size):
                raise MachineFileError(f"transition out of range: '{line}'", keyword)
            if sym in delta[q]:
                raise MachineFileError(f"duplicate transition ({q}, {sym})", keyword)
            delta[q][sym] = t
        else:
            break  # next section
    if tau_seen != n_states:
        raise MachineFileError(
            f"expected {n_states} TAU lines, found {tau_seen}", keyword
        )
    dfsa = Dfsa(
        n_states=n_states,
        start=start,
        alphabet_size=alphabet_size,
        delta=delta,
        finals=set(range(n_states)),
        color=list(tau),
    )
    return attach_tables(dfsa, list(tau), n_rules)


def loads_machine(text: str) -> Bimachine | ExtendedMachine:
    r = _Reader(text)
    if r.next("header").strip() != FORMAT_HEADER:
        raise MachineFileError(f"not a '{FORMAT_HEADER}' file", "header")

    fields = r.next("SIGMA").split()
    if len(fields) != 2 or fields[0] != "SIGMA":
        raise MachineFileError("expected 'SIGMA <count>'", "SIGMA")
    names = [r.next("SIGMA") for _ in range(int(fields[1]))]
    alphabet = Alphabet(names)
    if len(alphabet) != len(names):
        raise MachineFileError("duplicate symbol name", "SIGMA")

    priority: tuple[str, ...] = ("name", "pos")
    line = r.peek()
    if line is not None and line.startswith("PRIORITY"):
        r.next("PRIORITY")
        parts = line.split()[1:]
        if parts:
            priority = tuple(parts)

    fields = r.next("ACTIONS").split()
    if len(fields) != 2 or fields[0] != "ACTIONS":
        raise MachineFileError("expected 'ACTIONS <count>'", "ACTIONS")
    n_rules = int(fields[1])
    if n_rules < 1:
        raise MachineFileError("machine has no rules", "ACTIONS")
    actions = tuple(r.next("ACTIONS") for _ in range(n_rules))

    left = _read_matcher(r, "LEFT", len(alphabet), n_rules)
    right = _read_matcher(r, "RIGHT", len(alphabet), n_rules)
    base = Bimachine(
        left=left,
        right=right,
        rule_actions=actions,
        alphabet=alphabet,
        feature_priority=priority,
    )

    line = r.peek()
    if line is not None and line.split()[:1] == ["PI"]:
        pi = _read_matcher(r, "PI", n_rules, n_rules)
        return ExtendedMachine(base=base, pi=pi)
    if line is not None and line.strip():
        raise MachineFileError(f"unexpected trailing content '{line}'", "end")
    return base


def load_machine(path: str | Path) -> Bimachine | ExtendedMachine:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MachineFileError(str(exc)) from exc
    return loads_machine(text)
