"""Command-line interface.

Subcommands: ``compile`` a grammar to a machine file, ``tag`` a token or
item stream with a compiled machine, ``stats`` for machine sizes, ``synth``
for seeded synthetic grammars, and ``bench`` to compare the jitted and pure
Python tagging kernels.

Exit codes: 0 success, 1 usage, 2 grammar error, 3 machine-file error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

import numpy as np

from . import _kernels, synth
from .control import n_best
from .errors import BimtagError, GrammarError, MachineFileError, PatternError
from .extended import ExtendedMachine, compile_extended, extend_trivially
from .grammar import (
    item_symbol,
    parse_grammar,
    parse_item_line,
    render_grammar,
    tokenize_plain,
)
from .machine import Bimachine, compile_bimachine
from .rules import inject_default_rule
from .serialize import load_machine, save_machine

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_GRAMMAR = 2
EXIT_MACHINE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _stats_line(stats: dict[str, int], compile_ms: int | None = None) -> str:
    fields = [f"{k}={v}" for k, v in stats.items()]
    if compile_ms is not None:
        fields.append(f"compile_ms={compile_ms}")
    return " ".join(fields)


def _compile_from_file(path: str, extended: bool, minimize: bool):
    text = Path(path).read_text(encoding="utf-8")
    parsed = parse_grammar(text)
    wants_history = extended or any(r.history is not None for r in parsed.rules)
    rs = inject_default_rule(parsed)
    t0 = time.perf_counter()
    machine = (
        compile_extended(rs, minimize=minimize)
        if wants_history
        else compile_bimachine(rs, minimize=minimize)
    )
    ms = int((time.perf_counter() - t0) * 1000)
    return machine, ms


def cmd_compile(args) -> int:
    machine, ms = _compile_from_file(args.grammar, args.extended, not args.no_minimize)
    save_machine(machine, args.out)
    print(_stats_line(machine.stats(), ms))
    return EXIT_OK


def cmd_stats(args) -> int:
    if args.grammar:
        machine, ms = _compile_from_file(args.grammar, args.extended, not args.no_minimize)
        print(_stats_line(machine.stats(), ms))
    else:
        machine = load_machine(args.machine)
        print(_stats_line(machine.stats(), 0))
    return EXIT_OK


def _read_items(stream, plain: bool | None):
    """(display token, feature pairs or None) per item; auto-detects plain
    token lines vs feature-pair lines unless forced."""
    items: list[tuple[str, list[tuple[str, str]] | None]] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if plain is None:
            plain = "=" not in line
        if plain:
            items.extend((tok, None) for tok in line.split())
        else:
            pairs = parse_item_line(line, lineno)
            display = next((v for f, v in pairs if f == "name"), line)
            items.append((display, pairs))
    return items


def _symbolize(items, machine) -> list[int]:
    alphabet = machine.alphabet
    word = []
    for display, pairs in items:
        if pairs is None:
            word.extend(tokenize_plain([display], alphabet))
        else:
            word.append(item_symbol(pairs, alphabet, machine.feature_priority))
    return word


def _fmt_set(s) -> str:
    return "{" + ",".join(str(i) for i in sorted(s)) + "}"


def cmd_tag(args) -> int:
    machine = load_machine(args.machine)
    base = machine.base if isinstance(machine, ExtendedMachine) else machine
    plain = True if args.plain else (False if args.features else None)
    if args.input:
        with open(args.input, encoding="utf-8") as stream:
            items = _read_items(stream, plain)
    else:
        items = _read_items(sys.stdin, plain)
    word = _symbolize(items, base)

    if args.nbest:
        if args.nbest < 1:
            print("bimtag: --nbest must be at least 1", file=sys.stderr)
            return EXIT_USAGE
        if not isinstance(machine, ExtendedMachine):
            machine = extend_trivially(machine)
        scores = _load_scores(args.scores, machine.n)
        for rank, item in enumerate(n_best(machine, scores, word, args.nbest), start=1):
            seq = " ".join(item.actions)
            print(f"nbest {rank}\ttotal={item.total:g}\t{seq}")
        return EXIT_OK

    if args.all_matches:
        from .control import all_matching_rules

        sets = all_matching_rules(base, word)
        for (display, _), match in zip(items, sets):
            print(f"{display}\t{_fmt_set(match)}")
        return EXIT_OK

    if args.trace:
        steps = machine.trace(word)
        for (display, _), step in zip(items, steps):
            extra = ""
            if step.pi_state is not None:
                extra = f" P={step.pi_state} pi={_fmt_set(step.pi_rules)}"
            print(
                f"{display}\t{step.action}\t"
                f"L={step.left_state} R={step.right_state}"
                f" left={_fmt_set(step.left_rules)} right={_fmt_set(step.right_rules)}"
                f"{extra} both={_fmt_set(step.matching)} fired={step.fired}"
            )
        return EXIT_OK

    labels = machine.apply(word)
    for (display, _), label in zip(items, labels):
        print(f"{display}\t{label}")
    return EXIT_OK


def _load_scores(path: str | None, n_rules: int) -> dict[int, float]:
    scores = {i: 0.0 for i in range(1, n_rules + 1)}
    if path is None:
        return scores
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            idx_text, value_text = line.split()
            idx, value = int(idx_text), float(value_text)
        except ValueError as exc:
            raise GrammarError(f"bad score line '{raw}'", lineno) from exc
        if not 1 <= idx <= n_rules:
            raise GrammarError(f"score for unknown rule {idx}", lineno)
        scores[idx] = value
    return scores


def cmd_synth(args) -> int:
    rng = random.Random(args.seed)
    rs = synth.random_ruleset(
        rng, args.rules, args.sigma, with_history=args.history, max_depth=args.depth
    )
    text = render_grammar(rs)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    rs = inject_default_rule(
        synth.random_ruleset(rng, args.rules, args.sigma, max_depth=2)
    )
    t0 = time.perf_counter()
    machine = compile_bimachine(rs)
    compile_s = time.perf_counter() - t0
    word = np.asarray(synth.random_stream(rng, args.sigma, args.tokens), dtype=np.int32)
    out = np.empty(len(word), dtype=np.int32)
    table_args = (
        machine.left.delta_table, machine.left.tau_table, machine.left.dfsa.start,
        machine.right.delta_table, machine.right.tau_table, machine.right.dfsa.start,
        word, out,
    )

    def timed(kernels, repeats=3):
        kernels.select_rules(*table_args)  # warm-up (jit compile)
        best = min(
            _timed_once(kernels.select_rules, table_args) for _ in range(repeats)
        )
        return best, out.copy()

    py_time, py_out = timed(_kernels.PY_KERNELS)
    print(f"grammar: {args.rules} rules, |sigma|={args.sigma}, compile {compile_s:.2f}s")
    print(f"python kernels: {args.tokens} tokens in {py_time * 1000:.2f} ms")
    try:
        jit = _kernels.jit_kernels()
    except Exception as exc:
        print(f"numba unavailable ({exc}); benchmarked the fallback only")
        return EXIT_OK
    jit_time, jit_out = timed(jit)
    agree = "outputs agree" if (py_out == jit_out).all() else "OUTPUTS DIFFER"
    print(f"numba kernels:  {args.tokens} tokens in {jit_time * 1000:.2f} ms")
    print(f"speedup: {py_time / jit_time:.1f}x ({agree})")
    return EXIT_OK


def _timed_once(fn, table_args):
    t0 = time.perf_counter()
    fn(*table_args)
    return time.perf_counter() - t0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bimtag", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a grammar file to a machine file")
    p.add_argument("--grammar", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--extended", action="store_true",
                   help="build the history machine even if no rule restricts history")
    p.add_argument("--no-minimize", action="store_true")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("tag", help="tag a token/item stream")
    p.add_argument("--machine", required=True)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--all-matches", action="store_true")
    p.add_argument("--nbest", type=int, metavar="N")
    p.add_argument("--scores", metavar="PATH", help="rule scores for --nbest")
    p.add_argument("--plain", action="store_true", help="treat input as bare tokens")
    p.add_argument("--features", action="store_true", help="treat input as feature items")
    p.add_argument("input", nargs="?", help="input file (default: stdin)")
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("stats", help="report machine sizes and compile time")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--grammar")
    g.add_argument("--machine")
    p.add_argument("--extended", action="store_true")
    p.add_argument("--no-minimize", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("synth", help="emit a seeded synthetic grammar")
    p.add_argument("--rules", type=int, default=10)
    p.add_argument("--sigma", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--history", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("bench", help="compare jitted and pure-Python kernels")
    p.add_argument("--rules", type=int, default=20)
    p.add_argument("--sigma", type=int, default=8)
    p.add_argument("--tokens", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GrammarError, PatternError) as exc:
        print(f"bimtag: grammar error: {exc}", file=sys.stderr)
        return EXIT_GRAMMAR
    except MachineFileError as exc:
        print(f"bimtag: machine file error: {exc}", file=sys.stderr)
        return EXIT_MACHINE
    except FileNotFoundError as exc:
        print(f"bimtag: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BimtagError as exc:
        print(f"bimtag: {exc}", file=sys.stderr)
        return EXIT_MACHINE


def entry():  # console-script hook
    sys.exit(main())


if __name__ == "__main__":
    entry()
