"""Regular-expression ASTs over symbol ids, with a concrete text syntax.

Syntax, designed to match how context patterns are written in grammar files:

* juxtaposition is concatenation, ``|`` is union, ``*`` ``+`` ``?`` are
  postfix, ``(...)`` groups, ``.`` matches any input symbol;
* a bare token names one symbol (plain-token alphabets);
* ``[f=v1|v2]`` names a class of feature-value symbols (``[a|b]`` works for
  plain tokens too);
* the empty string and ``()`` both denote the empty word.

Concat/Union produced by the parser are flat (children are never the same
node kind) which gives render/parse round-trip stability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union as TUnion

from .alphabet import Alphabet
from .errors import PatternError


@dataclass(frozen=True)
class Empty:
    """The empty word (epsilon)."""


@dataclass(frozen=True)
class Symbol:
    sym: int


@dataclass(frozen=True)
class Class:
    """A non-empty set of alternative symbols, matched as one item."""

    syms: frozenset[int]

    def __post_init__(self):
        if not self.syms:
            raise ValueError("empty symbol class")


@dataclass(frozen=True)
class Any:
    """Any single input-alphabet symbol."""


@dataclass(frozen=True)
class Concat:
    parts: tuple["RegexAst", ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("empty concatenation")


@dataclass(frozen=True)
class Union:
    parts: tuple["RegexAst", ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("empty union")


@dataclass(frozen=True)
class Star:
    child: "RegexAst"


@dataclass(frozen=True)
class Plus:
    child: "RegexAst"


@dataclass(frozen=True)
class Optional:
    child: "RegexAst"


RegexAst = TUnion[Empty, Symbol, Class, Any, Concat, Union, Star, Plus, Optional]

_PUNCT = "()|*+?."


def _scan(text: str) -> list[tuple[str, str, int]]:
    """Tokenize pattern text into (kind, payload, offset) triples."""
    out: list[tuple[str, str, int]] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in _PUNCT:
            out.append(("punct", c, i))
            i += 1
        elif c == "[":
            j = text.find("]", i + 1)
            if j < 0:
                raise PatternError("unterminated '['", i)
            out.append(("bracket", text[i + 1 : j], i))
            i = j + 1
        elif c == "]":
            raise PatternError("unmatched ']'", i)
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in _PUNCT and text[j] not in "[]":
                j += 1
            out.append(("token", text[i:j], i))
            i = j
    return out


def _bracket_symbols(body: str, pos: int) -> list[str]:
    """Expand a bracket body into symbol names.

    ``pos=dt|cd`` gives ``pos=dt, pos=cd``; pieces without ``=`` inherit the
    feature of the preceding piece, or stand alone for plain-token alphabets.
    """
    names: list[str] = []
    feature = None
    for piece in body.split("|"):
        piece = piece.strip()
        if not piece:
            raise PatternError("empty alternative in '[...]'", pos)
        if any(ch.isspace() for ch in piece):
            raise PatternError(f"whitespace inside '[{body}]'; one feature per bracket", pos)
        if "=" in piece:
            feature, value = piece.split("=", 1)
            if not feature or not value:
                raise PatternError(f"malformed pair '{piece}'", pos)
            names.append(f"{feature}={value}")
        elif feature is not None:
            names.append(f"{feature}={piece}")
        else:
            names.append(piece)
    return names


# An atom resolver maps token text to one symbol id or a set of them.
AtomResolver = Callable[[str, int, bool], "int | frozenset[int]"]


class _Parser:
    def __init__(self, text: str, resolve: AtomResolver):
        self.tokens = _scan(text)
        self.resolve = resolve
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> RegexAst:
        if not self.tokens:
            return Empty()
        ast = self.union()
        tok = self.peek()
        if tok is not None:
            raise PatternError(f"unexpected '{tok[1]}'", tok[2])
        return ast

    def union(self) -> RegexAst:
        parts = [self.concat()]
        while True:
            tok = self.peek()
            if tok is None or tok[1] != "|":
                break
            self.take()
            parts.append(self.concat())
        return parts[0] if len(parts) == 1 else Union(tuple(parts))

    def concat(self) -> RegexAst:
        parts = [self.postfix()]
        while True:
            tok = self.peek()
            if tok is None or (tok[0] == "punct" and tok[1] in "|)"):
                break
            parts.append(self.postfix())
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def postfix(self) -> RegexAst:
        ast = self.atom()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "punct" or tok[1] not in "*+?":
                break
            self.take()
            ast = {"*": Star, "+": Plus, "?": Optional}[tok[1]](ast)
        return ast

    def atom(self) -> RegexAst:
        tok = self.take()
        if tok is None:
            raise PatternError("pattern ends unexpectedly", 0)
        kind, text, pos = tok
        if kind == "punct":
            if text == "(":
                nxt = self.peek()
                if nxt is not None and nxt[0] == "punct" and nxt[1] == ")":
                    self.take()
                    return Empty()
                inner = self.union()
                closing = self.take()
                if closing is None or closing[1] != ")":
                    raise PatternError("missing ')'", pos)
                return inner
            if text == ".":
                return Any()
            raise PatternError(f"unexpected '{text}'", pos)
        resolved = self.resolve(text, pos, kind == "bracket")
        if isinstance(resolved, int):
            return Symbol(resolved)
        if len(resolved) == 1:
            return Symbol(next(iter(resolved)))
        return Class(resolved)


def parse_regex(text: str, alphabet: Alphabet, *, intern: bool = False) -> RegexAst:
    """Parse pattern text over ``alphabet``.

    With ``intern=True`` unknown symbol names are added to the alphabet
    (used while reading grammar files, where the rules define the alphabet);
    otherwise they raise :class:`PatternError`.
    """

    def resolve(tok: str, pos: int, is_bracket: bool):
        names = _bracket_symbols(tok, pos) if is_bracket else [tok]
        ids = []
        for name in names:
            if intern:
                ids.append(alphabet.intern(name))
            elif name in alphabet:
                ids.append(alphabet.id_of(name))
            else:
                raise PatternError(f"unknown symbol '{name}'", pos)
        return frozenset(ids)

    return _Parser(text, resolve).parse()


def parse_rule_id_regex(text: str) -> RegexAst:
    """Parse a pattern over rule indices (positive integers, 1-based).

    Symbol ids in the result are the rule indices themselves; they are mapped
    into the rule-id universe when an output-history machine is compiled.
    """

    def resolve(tok: str, pos: int, is_bracket: bool):
        if is_bracket:
            raise PatternError("'[...]' classes are not valid over rule ids", pos)
        if not tok.isdigit() or int(tok) < 1:
            raise PatternError(f"expected a rule index, got '{tok}'", pos)
        return int(tok)

    return _Parser(text, resolve).parse()


def reverse(ast: RegexAst) -> RegexAst:
    """Mirror the language: Concat children flip, everything else recurses."""
    if isinstance(ast, Concat):
        return Concat(tuple(reverse(p) for p in reversed(ast.parts)))
    if isinstance(ast, Union):
        return Union(tuple(reverse(p) for p in ast.parts))
    if isinstance(ast, Star):
        return Star(reverse(ast.child))
    if isinstance(ast, Plus):
        return Plus(reverse(ast.child))
    if isinstance(ast, Optional):
        return Optional(reverse(ast.child))
    return ast


def symbols_of(ast: RegexAst) -> frozenset[int]:
    """All symbol ids mentioned by the pattern (Any contributes none)."""
    acc: set[int] = set()

    def walk(node: RegexAst):
        if isinstance(node, Symbol):
            acc.add(node.sym)
        elif isinstance(node, Class):
            acc.update(node.syms)
        elif isinstance(node, (Concat, Union)):
            for p in node.parts:
                walk(p)
        elif isinstance(node, (Star, Plus, Optional)):
            walk(node.child)

    walk(ast)
    return frozenset(acc)


def _render_name(name: str) -> str:
    return f"[{name}]" if "=" in name else name


def _render_class(syms: frozenset[int], name_of) -> str:
    names = sorted(name_of(s) for s in syms)
    feats = {n.split("=", 1)[0] for n in names if "=" in n}
    if len(feats) == 1 and all("=" in n for n in names):
        feat = feats.pop()
        values = "|".join(n.split("=", 1)[1] for n in names)
        return f"[{feat}={values}]"
    # Plain names first: a bare piece after an f=v piece would inherit f.
    plain = [n for n in names if "=" not in n]
    pairs = [n for n in names if "=" in n]
    return "[" + "|".join(plain + pairs) + "]"


def render(ast: RegexAst, name_of: Callable[[int], str]) -> str:
    """Concrete syntax for ``ast``; ``parse_regex(render(a)) == a``.

    ``name_of`` maps symbol ids back to names (``str`` for rule-id patterns).
    """

    def atom(node: RegexAst) -> str:
        if isinstance(node, Symbol):
            return _render_name(name_of(node.sym))
        if isinstance(node, Class):
            return _render_class(node.syms, name_of)
        if isinstance(node, Any):
            return "."
        if isinstance(node, Empty):
            return "()"
        return "( " + go(node) + " )"

    def suffixed(node: RegexAst) -> str:
        if isinstance(node, Star):
            return atom(node.child) + "*"
        if isinstance(node, Plus):
            return atom(node.child) + "+"
        if isinstance(node, Optional):
            return atom(node.child) + "?"
        return atom(node)

    def concat_level(node: RegexAst) -> str:
        if isinstance(node, Concat):
            return " ".join(suffixed(p) if not isinstance(p, Union) else atom(p) for p in node.parts)
        if isinstance(node, Union):
            return atom(node)
        return suffixed(node)

    def go(node: RegexAst) -> str:
        if isinstance(node, Union):
            return " | ".join(concat_level(p) for p in node.parts)
        return concat_level(node)

    if isinstance(ast, Empty):
        return ""
    return go(ast)
