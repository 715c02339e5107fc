"""Grammar files: parse, render, and map input items to alphabet symbols.

File format::

    # comment to end of line
    priority: name, pos            # feature lookup order for input items

    [name=that] / [name=suspects] /             -> [sense=2];
    ([pos=dt|cd]|[name=terror]) / [name=suspects] / -> [sense=1];
    2 : a / b / c*                              -> T;   # optional history prefix

A rule is ``history : left / focus / right -> action ;`` where the history
part is optional, left/right may be empty (the empty word), and the focus
must denote exactly one item -- a symbol or a bracket class. Statements end
with ``;`` and may span lines. Rule order in the file is priority order.

Every feature pair mentioned in a rule is one alphabet symbol; the reserved
``<default>`` symbol stands for items carrying none of them.
"""

from __future__ import annotations

import re

from . import regexes as rx
from .alphabet import DEFAULT_SYMBOL, Alphabet
from .errors import GrammarError, PatternError
from .rules import Rule, RuleSet

_PRIORITY_RE = re.compile(r"^\s*priority\s*:\s*(.*)$")


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def _split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside brackets and parentheses."""
    parts, depth, buf = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    parts.append("".join(buf))
    return parts


def _focus_set(ast: rx.RegexAst, line: int) -> frozenset[int]:
    if isinstance(ast, rx.Symbol):
        return frozenset((ast.sym,))
    if isinstance(ast, rx.Class):
        return ast.syms
    raise GrammarError(
        "focus must be a single symbol or one bracket class (one input item)", line
    )


def parse_grammar(text: str) -> RuleSet:
    """Parse grammar text into an (un-normalized) rule set.

    The alphabet is every symbol the rules mention, in first-mention order,
    with ``<default>`` interned first.
    """
    alphabet = Alphabet([DEFAULT_SYMBOL])
    priority: tuple[str, ...] = ("name", "pos")

    lines = _strip_comments(text).splitlines()
    statements: list[tuple[str, int]] = []  # (statement text, 1-based start line)
    buf: list[str] = []
    buf_line = 0  # line of the first non-blank content in buf
    last_line = 0
    for lineno, line in enumerate(lines, start=1):
        last_line = lineno
        if buf_line == 0:
            m = _PRIORITY_RE.match(line)
            if m:
                features = [f for f in re.split(r"[,\s]+", m.group(1).strip()) if f]
                if not features:
                    raise GrammarError("empty priority directive", lineno)
                priority = tuple(features)
                continue
        rest = line
        while ";" in rest:
            head, rest = rest.split(";", 1)
            buf.append(head)
            if buf_line == 0 and head.strip():
                buf_line = lineno
            stmt = " ".join(buf).strip()
            if stmt:
                statements.append((stmt, buf_line or lineno))
            buf = []
            buf_line = 0
        buf.append(rest)
        if buf_line == 0 and rest.strip():
            buf_line = lineno
    if " ".join(buf).strip():
        raise GrammarError("unterminated rule (missing ';')", buf_line or last_line)

    rules: list[Rule] = []
    for stmt, line in statements:
        rules.append(_parse_rule(stmt, line, len(rules) + 1, alphabet))
    return RuleSet(rules, alphabet, priority)


def _parse_rule(stmt: str, line: int, index: int, alphabet: Alphabet) -> Rule:
    if "->" not in stmt:
        raise GrammarError("rule lacks '->'", line)
    context, action_text = stmt.rsplit("->", 1)
    action = _normalize_action(action_text.strip(), line)

    history_ast = None
    colon_parts = _split_top(context, ":")
    if len(colon_parts) > 2:
        raise GrammarError("more than one ':' in rule", line)
    if len(colon_parts) == 2:
        history_text, context = colon_parts
        try:
            history_ast = rx.parse_rule_id_regex(history_text.strip())
        except PatternError as exc:
            raise GrammarError(f"bad history pattern: {exc}", line) from exc

    slash_parts = _split_top(context, "/")
    if len(slash_parts) != 3:
        raise GrammarError(
            "rule context must be 'left / focus / right'"
            f" (found {len(slash_parts) - 1} '/' separators)",
            line,
        )
    left_text, focus_text, right_text = (p.strip() for p in slash_parts)
    if not focus_text:
        raise GrammarError("empty focus", line)
    try:
        left = rx.parse_regex(left_text, alphabet, intern=True)
        focus_ast = rx.parse_regex(focus_text, alphabet, intern=True)
        right = rx.parse_regex(right_text, alphabet, intern=True)
    except PatternError as exc:
        raise GrammarError(str(exc), line) from exc
    return Rule(
        index=index,
        left=left,
        focus=_focus_set(focus_ast, line),
        right=right,
        action=action,
        history=history_ast,
    )


def _normalize_action(text: str, line: int) -> str:
    """``[sense=2]`` becomes the label ``sense=2``; bare tokens stay as-is."""
    if not text:
        raise GrammarError("empty action", line)
    if text.startswith("[") and text.endswith("]"):
        inner = text[1:-1].strip()
        if not inner or "[" in inner or "]" in inner:
            raise GrammarError(f"malformed action '{text}'", line)
        return inner
    if any(ch.isspace() for ch in text):
        raise GrammarError(f"action must be a single label, got '{text}'", line)
    return text


def render_grammar(rs: RuleSet) -> str:
    """Grammar text that reparses to an identical rule set.

    The injected default rule is omitted (it is not part of any file;
    re-inject after parsing).
    """
    name_of = rs.alphabet.name_of
    out = ["priority: " + ", ".join(rs.feature_priority), ""]
    for rule in rs.rules:
        if rule.is_default:
            continue
        prefix = ""
        if rule.history is not None:
            prefix = rx.render(rule.history, str) + " : "
        focus = rx.render(
            rx.Symbol(next(iter(rule.focus)))
            if len(rule.focus) == 1
            else rx.Class(rule.focus),
            name_of,
        )
        action = f"[{rule.action}]" if "=" in rule.action else rule.action
        out.append(
            f"{prefix}{rx.render(rule.left, name_of)} / {focus} / "
            f"{rx.render(rule.right, name_of)} -> {action};"
        )
    return "\n".join(out) + "\n"


def parse_item_line(line: str, lineno: int = 0) -> list[tuple[str, str]]:
    """Feature pairs of one input item, in written order."""
    pairs = []
    for tok in line.split():
        if "=" not in tok:
            raise GrammarError(f"malformed feature pair '{tok}'", lineno or None)
        f, v = tok.split("=", 1)
        if not f or not v:
            raise GrammarError(f"malformed feature pair '{tok}'", lineno or None)
        pairs.append((f, v))
    return pairs


def item_symbol(
    pairs: list[tuple[str, str]],
    alphabet: Alphabet,
    priority: tuple[str, ...],
) -> int:
    """Symbol id of an item: its highest-priority pair known to the alphabet.

    Features in the priority list rank first (in list order); other features
    follow in the order written on the item. Items with no known pair map to
    the default symbol.
    """
    rank = {f: i for i, f in enumerate(priority)}
    ordered = sorted(
        range(len(pairs)),
        key=lambda i: (rank.get(pairs[i][0], len(priority)), i),
    )
    for i in ordered:
        name = f"{pairs[i][0]}={pairs[i][1]}"
        if name in alphabet:
            return alphabet.id_of(name)
    return alphabet.id_of(DEFAULT_SYMBOL)


def tokenize_items(
    lines,
    alphabet: Alphabet,
    priority: tuple[str, ...] = ("name", "pos"),
) -> list[int]:
    """Map feature-pair item lines to symbol ids (blank lines are skipped)."""
    word = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        word.append(item_symbol(parse_item_line(line, lineno), alphabet, priority))
    return word


def tokenize_plain(tokens, alphabet: Alphabet) -> list[int]:
    """Map bare tokens to symbol ids; unknown tokens become the default."""
    default = alphabet.id_of(DEFAULT_SYMBOL)
    return [alphabet.id_of(t) if t in alphabet else default for t in tokens]
