import pytest
from hypothesis import given, settings, strategies as st

from bimtag import regexes as rx
from bimtag.alphabet import Alphabet
from bimtag.errors import PatternError
from bimtag.regexes import parse_regex, parse_rule_id_regex, render, reverse
from bimtag.synth import random_regex

from helpers import ast_matches, words_up_to


@pytest.fixture
def abc():
    return Alphabet(["a", "b", "c"])


def test_empty_text_is_epsilon(abc):
    assert parse_regex("", abc) == rx.Empty()
    assert parse_regex("   ", abc) == rx.Empty()


def test_precedence_concat_binds_tighter_than_union(abc):
    ast = parse_regex("a b* | c", abc)
    a, b, c = (abc.id_of(x) for x in "abc")
    assert ast == rx.Union(
        (rx.Concat((rx.Symbol(a), rx.Star(rx.Symbol(b)))), rx.Symbol(c))
    )


def test_feature_class():
    alphabet = Alphabet()
    ast = parse_regex("[pos=dt|cd]", alphabet, intern=True)
    assert ast == rx.Class(
        frozenset((alphabet.id_of("pos=dt"), alphabet.id_of("pos=cd")))
    )


def test_single_feature_bracket_is_symbol():
    alphabet = Alphabet()
    ast = parse_regex("[name=terror]", alphabet, intern=True)
    assert ast == rx.Symbol(alphabet.id_of("name=terror"))


def test_plain_token_class(abc):
    assert parse_regex("[a|b]", abc) == rx.Class(
        frozenset((abc.id_of("a"), abc.id_of("b")))
    )


def test_postfix_and_parens(abc):
    a, b = abc.id_of("a"), abc.id_of("b")
    assert parse_regex("(a b)+?", abc) == rx.Optional(
        rx.Plus(rx.Concat((rx.Symbol(a), rx.Symbol(b))))
    )
    assert parse_regex("()", abc) == rx.Empty()
    assert parse_regex(".*", abc) == rx.Star(rx.Any())


def test_unknown_symbol_has_position(abc):
    with pytest.raises(PatternError) as err:
        parse_regex("a  xyz", abc)
    assert "xyz" in str(err.value)
    assert err.value.pos == 3


@pytest.mark.parametrize("bad", ["a |", "( a", "a )", "*", "[pos=]", "[", "a ]"])
def test_syntax_errors(abc, bad):
    with pytest.raises(PatternError):
        parse_regex(bad, abc)


def test_rule_id_regex():
    ast = parse_rule_id_regex("(1 2)* | 3")
    assert ast == rx.Union(
        (rx.Star(rx.Concat((rx.Symbol(1), rx.Symbol(2)))), rx.Symbol(3))
    )
    with pytest.raises(PatternError):
        parse_rule_id_regex("x")
    with pytest.raises(PatternError):
        parse_rule_id_regex("0")


def test_reverse_structure(abc):
    a, b = abc.id_of("a"), abc.id_of("b")
    assert reverse(rx.Symbol(a)) == rx.Symbol(a)
    assert reverse(rx.Concat((rx.Symbol(a), rx.Symbol(b)))) == rx.Concat(
        (rx.Symbol(b), rx.Symbol(a))
    )
    assert reverse(rx.Star(rx.Concat((rx.Symbol(a), rx.Symbol(b))))) == rx.Star(
        rx.Concat((rx.Symbol(b), rx.Symbol(a)))
    )


def test_reverse_language_is_mirror(abc):
    # Exhaustive over short words: w in L(reverse(r)) iff mirror(w) in L(r).
    ast = parse_regex("( a b )* | c+ b?", abc)
    rev = reverse(ast)
    for w in words_up_to(range(len(abc)), 6):
        assert ast_matches(rev, w) == ast_matches(ast, tuple(reversed(w)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(2, 4))
def test_reverse_reverse_is_identity_on_language(seed, sigma):
    import random

    rng = random.Random(seed)
    ast = random_regex(rng, range(sigma), 3)
    double = reverse(reverse(ast))
    for w in words_up_to(range(sigma), 5):
        assert ast_matches(double, w) == ast_matches(ast, w)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9), st.integers(2, 4))
def test_render_parse_round_trip(seed, sigma):
    import random

    rng = random.Random(seed)
    names = [f"s{i}" for i in range(sigma)] + ["pos=dt", "pos=cd", "name=x"]
    alphabet = Alphabet(names)
    ast = random_regex(rng, range(len(alphabet)), 3)
    text = render(ast, alphabet.name_of)
    assert parse_regex(text, alphabet) == ast
