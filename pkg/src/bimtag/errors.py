"""Exception hierarchy shared across the package."""

from __future__ import annotations


class BimtagError(Exception):
    """Base class for all errors raised by bimtag."""


class PatternError(BimtagError):
    """Malformed pattern text or reference to an unknown symbol.

    ``pos`` is the 0-based character offset into the pattern string.
    """

    def __init__(self, message: str, pos: int | None = None):
        if pos is not None:
            message = f"{message} (at offset {pos})"
        super().__init__(message)
        self.pos = pos


class GrammarError(BimtagError):
    """Malformed grammar file. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MachineFileError(BimtagError):
    """Unreadable or inconsistent serialized machine file."""

    def __init__(self, message: str, section: str | None = None):
        if section is not None:
            message = f"section {section}: {message}"
        super().__init__(message)
        self.section = section


class MachineFaultError(BimtagError):
    """Internal inconsistency in a compiled machine.

    The canonical cause is applying a machine compiled from a rule set that
    never went through default-rule injection, so no rule matches somewhere.
    """
