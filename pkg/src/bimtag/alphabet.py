"""Symbol interning: dense integer ids for input-alphabet symbols.

Symbol ids are contiguous ``0 .. len(alphabet)-1``. Auxiliary symbols used
only during construction (pattern end markers) live in a range above the
input alphabet and never appear in finished machines; rule-id symbols of the
output-history automaton live in their own universe of size n.
"""

from __future__ import annotations

from typing import Iterable, Iterator

#: Reserved symbol that every grammar alphabet contains at id 0; input items
#: carrying no known symbol map to it.
DEFAULT_SYMBOL = "<default>"


class Alphabet:
    """Bidirectional name <-> dense id table."""

    __slots__ = ("_names", "_ids")

    def __init__(self, names: Iterable[str] = ()):
        self._names: list[str] = []
        self._ids: dict[str, int] = {}
        for name in names:
            self.intern(name)

    def intern(self, name: str) -> int:
        """Return the id of ``name``, allocating the next id if new."""
        sym = self._ids.get(name)
        if sym is None:
            sym = len(self._names)
            self._names.append(name)
            self._ids[name] = sym
        return sym

    def id_of(self, name: str) -> int:
        return self._ids[name]

    def name_of(self, sym: int) -> str:
        return self._names[sym]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._ids

    def __iter__(self) -> Iterator[str]:
        return iter(self._names)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Alphabet):
            return NotImplemented
        return self._names == other._names

    def __repr__(self) -> str:
        return f"Alphabet({self._names!r})"
