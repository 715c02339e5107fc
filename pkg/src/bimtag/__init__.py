"""bimtag: compile ordered tagging rules into deterministic two-pass machines.

Typical use::

    from bimtag import parse_grammar, inject_default_rule, compile_bimachine

    rs = inject_default_rule(parse_grammar(open("rules.txt").read()))
    machine = compile_bimachine(rs)
    labels = machine.apply(word)      # word = list of symbol ids
"""

from .alphabet import DEFAULT_SYMBOL, Alphabet
from .control import NBestItem, ScoredRuleSet, all_matching_rules, n_best
from .errors import (
    BimtagError,
    GrammarError,
    MachineFaultError,
    MachineFileError,
    PatternError,
)
from .extended import ExtendedMachine, compile_extended, extend_trivially
from .grammar import (
    parse_grammar,
    render_grammar,
    tokenize_items,
    tokenize_plain,
)
from .machine import Bimachine, compile_bimachine
from .oracle import (
    oracle_best_sequences,
    oracle_extended,
    oracle_match_sets,
    oracle_tag,
)
from .regexes import parse_regex, parse_rule_id_regex, render, reverse
from .rules import VACUOUS_ACTION, Rule, RuleSet, inject_default_rule
from .serialize import dump_machine, load_machine, loads_machine, save_machine
from .simult import SimultMatcher, build_simult_matcher

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "Bimachine",
    "BimtagError",
    "DEFAULT_SYMBOL",
    "ExtendedMachine",
    "GrammarError",
    "MachineFaultError",
    "MachineFileError",
    "NBestItem",
    "PatternError",
    "Rule",
    "RuleSet",
    "ScoredRuleSet",
    "SimultMatcher",
    "VACUOUS_ACTION",
    "all_matching_rules",
    "build_simult_matcher",
    "compile_bimachine",
    "compile_extended",
    "dump_machine",
    "extend_trivially",
    "inject_default_rule",
    "load_machine",
    "loads_machine",
    "n_best",
    "oracle_best_sequences",
    "oracle_extended",
    "oracle_match_sets",
    "oracle_tag",
    "parse_grammar",
    "parse_regex",
    "parse_rule_id_regex",
    "render",
    "render_grammar",
    "reverse",
    "save_machine",
    "tokenize_items",
    "tokenize_plain",
]
