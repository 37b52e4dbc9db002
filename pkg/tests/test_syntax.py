import pickle

import pytest
from hypothesis import given, settings

from dbbel.syntax import (
    BOT, STAR, Atom, Conj, Disj, Neg, OracleBoundError, ParseError, atoms_of_language,
    classical_entails, conjoin, disjoin, is_classically_consistent, parse_root, parse_sentence,
    print_root, print_sentence, subsentences, truth_table, variables,
)

from generators import sentences
from oracles import evaluate, valuations

p, q, r = Atom("p"), Atom("q"), Atom("r")


@pytest.mark.parametrize("text, expected", [
    ("p", p),
    ("!p", Neg(p)),
    ("p & q | r", Disj(Conj(p, q), r)),
    ("p | q & r", Disj(p, Conj(q, r))),
    ("p & q & r", Conj(Conj(p, q), r)),
    ("p & (q & r)", Conj(p, Conj(q, r))),
    ("!!p", Neg(Neg(p))),
    ("!(p | q)", Neg(Disj(p, q))),
    ("_|_", BOT),
    ("  p&q  ", Conj(p, q)),
    ("x_1 | Long_Name2", Disj(Atom("x_1"), Atom("Long_Name2"))),
])
def test_parse_examples(text, expected):
    assert parse_sentence(text) == expected


def test_print_uses_minimal_parentheses():
    assert print_sentence(Conj(p, Conj(q, r))) == "p & (q & r)"
    assert print_sentence(Conj(Conj(p, q), r)) == "p & q & r"
    assert print_sentence(Conj(Disj(p, q), r)) == "(p | q) & r"
    assert print_sentence(Disj(p, Disj(q, r))) == "p | (q | r)"
    assert print_sentence(Neg(Conj(p, q))) == "!(p & q)"
    assert print_sentence(Neg(Neg(p))) == "!!p"
    assert str(BOT) == "_|_"


@settings(max_examples=300)
@given(sentences(max_leaves=20, bot=True))
def test_print_parse_roundtrip(s):
    assert parse_sentence(print_sentence(s)) == s


@given(sentences())
def test_equality_and_hash_are_structural(s):
    copy = parse_sentence(str(s))
    assert copy == s and hash(copy) == hash(s)
    assert pickle.loads(pickle.dumps(s)) == s


def test_sentences_are_immutable():
    with pytest.raises(AttributeError):
        p.name = "q"


@pytest.mark.parametrize("text, offset", [
    ("p &", 3),
    ("p && q", 3),
    ("(p | q", 6),
    ("p $ q", 2),
    ("", 0),
    ("p q", 2),
    ("p & *", 4),
])
def test_parse_errors_report_byte_offsets(text, offset):
    with pytest.raises(ParseError) as exc:
        parse_sentence(text)
    assert exc.value.offset == offset


def test_offsets_count_bytes_not_characters():
    with pytest.raises(ParseError) as exc:
        parse_sentence("p & é")
    assert exc.value.offset == 4
    with pytest.raises(ParseError) as exc:
        parse_sentence("é")
    assert exc.value.offset == 0


def test_implication_needs_the_switch():
    with pytest.raises(ParseError):
        parse_sentence("p -> q")
    assert parse_sentence("p -> q", implication=True) == Disj(Neg(p), q)
    # right associative, lowest precedence
    assert parse_sentence("p -> q -> r", implication=True) == Disj(Neg(p), Disj(Neg(q), r))
    assert parse_sentence("p & q -> r", implication=True) == Disj(Neg(Conj(p, q)), r)


def test_roots():
    assert parse_root("*") is STAR
    assert parse_root(" * ") is STAR
    assert print_root(STAR) == "*"
    assert parse_root("p") == p


def test_subsentences_are_closed_and_ordered():
    s = parse_sentence("(p & q) | !p")
    subs = subsentences([s])
    assert set(subs) == {s, Conj(p, q), Neg(p), p, q}
    sizes = [x.size for x in subs]
    assert sizes == sorted(sizes)
    assert subsentences([BOT]) == [BOT]


def test_atoms_of_language_order():
    assert [str(a) for a in atoms_of_language(["p", "q"])] == ["p & q", "p & !q", "!p & q", "!p & !q"]
    with pytest.raises(ValueError):
        atoms_of_language([])
    with pytest.raises(ValueError):
        atoms_of_language(["p", "p"])


def test_conjoin_and_disjoin_nest_to_the_left():
    assert conjoin([p, q, r]) == Conj(Conj(p, q), r)
    assert disjoin([p, q, r]) == Disj(Disj(p, q), r)
    assert conjoin([p]) == p


@given(sentences())
def test_truth_table_matches_independent_evaluator(s):
    names = ["p", "q", "r"]
    table = truth_table(s, names)
    expected = [evaluate(s, v) for v in valuations(names)]
    assert table.tolist() == expected


def test_truth_table_rows_follow_atom_order():
    names = ["p", "q", "r"]
    for i, a in enumerate(atoms_of_language(names)):
        assert truth_table(a, names).tolist() == [j == i for j in range(8)]


def test_classical_checks():
    assert classical_entails([Conj(p, q)], p)
    assert not classical_entails([Disj(p, q)], p)
    assert classical_entails([], Disj(p, Neg(p)))
    assert classical_entails([p, Neg(p)], q)
    assert not is_classically_consistent(Conj(p, Neg(p)))
    assert is_classically_consistent(BOT) is False


def test_oracle_bound(monkeypatch):
    wide = disjoin([Atom(f"v{i}") for i in range(5)])
    with pytest.raises(OracleBoundError):
        classical_entails([], wide, bound=4)
    monkeypatch.setenv("DBBEL_BRUTE_FORCE_VARS", "3")
    with pytest.raises(OracleBoundError):
        classical_entails([], wide)
    monkeypatch.setenv("DBBEL_BRUTE_FORCE_VARS", "5")
    assert not classical_entails([], wide)


def test_variables_sorted_unique():
    assert variables([parse_sentence("q & p | q")]) == ["p", "q"]
