import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dbbel.fixtures import exclusive_background, levesque_goal, levesque_premises
from dbbel.proof import (
    RULES, Decision, DerivationTrace, Step, TraceError, analytic_universe, check_trace, closure0,
    decided_subset, decides0, derive0_trace, derives0, derives_k, inc_subset, is_inconsistent0,
    verify_trace, witness_tree,
)
from dbbel.syntax import BOT, STAR, Atom, Conj, Neg, classical_entails, parse_sentence

from generators import random_sentence, sentences
from oracles import entails, naive_derives0

p, q, r = Atom("p"), Atom("q"), Atom("r")
P = parse_sentence


@pytest.mark.parametrize("premises, goal, expected", [
    ([P("p & q")], p, True),
    ([STAR], P("p | !p"), False),
    ([P("!p"), P("p | q")], q, True),
    ([p, Neg(p)], q, True),
    ([P("!(p & q)"), p], Neg(q), True),
    ([P("!(p | q)")], Neg(q), True),
    ([p, q], P("(p & q) | r"), True),
    ([Neg(p)], P("!(p & q)"), True),
    ([P("!!p")], p, True),
    ([p], P("!!p"), True),
    ([P("p | q")], p, False),
    ([], P("p | !p"), False),
])
def test_derives0_examples(premises, goal, expected):
    assert derives0(premises, goal) is expected


def test_decides0_examples():
    target = P("(p | !p) | q")
    assert decides0(p, target) is Decision.POSITIVE
    assert decides0(Neg(q), target) is Decision.UNDECIDED
    gamma = exclusive_background(["Y", "G", "R"])
    assert decides0(Conj(Atom("R"), gamma), Atom("Y")) is Decision.NEGATIVE
    # inconsistent information is positive by ⊥E
    assert decides0(P("p & !p"), q) is Decision.POSITIVE


def test_decided_and_inconsistent_subsets():
    target = P("(p | !p) | q")
    assert decided_subset([p, Neg(q)], target) == [p]
    assert decided_subset([p, Neg(p)], p) == [p, Neg(p)]
    assert decided_subset([], p) == []
    assert inc_subset([P("p & !p"), q]) == [P("p & !p")]
    assert inc_subset([p]) == []


def test_deep_contradiction_is_not_0_inconsistent():
    s = P("(p | q) & (!p | q) & (p | !q) & (!p | !q)")
    assert inc_subset([s]) == []
    assert classical_entails([s], BOT)


def test_saturation_stays_in_the_analytic_universe():
    rng = random.Random(3)
    for _ in range(200):
        prem = [random_sentence(rng) for _ in range(2)]
        goal = random_sentence(rng)
        c = closure0(prem, [goal])
        U = analytic_universe(prem + [goal])
        assert set(c.derived) <= U
        with pytest.raises(ValueError):
            c.derives(Conj(goal, Atom("zz")))


@settings(max_examples=300, deadline=None)
@given(st.lists(sentences(max_leaves=6, bot=True), min_size=1, max_size=3), sentences(max_leaves=6))
def test_derives0_agrees_with_naive_saturation(prem, goal):
    assert derives0(prem, goal) == naive_derives0(prem, goal, widen=True)


@settings(max_examples=200, deadline=None)
@given(st.lists(sentences(max_leaves=6), min_size=1, max_size=3), sentences(max_leaves=6))
def test_traces_verify(prem, goal):
    trace = derive0_trace(prem, goal)
    if not derives0(prem, goal):
        assert trace is None
        return
    check_trace(trace, prem, goal)
    assert trace.conclusion == goal
    assert DerivationTrace.from_json(trace.to_json()) == trace


def test_trace_for_inconsistent_premises_ends_with_bottom_elimination():
    trace = derive0_trace([p, Neg(p)], q)
    assert [s.rule for s in trace.steps][-2:] == ["⊥I", "⊥E"]
    check_trace(trace, [p, Neg(p)], q)


def test_trace_verifier_rejects_bad_steps():
    prem = [P("p | q")]
    bogus = DerivationTrace((Step(P("p | q"), "premise"), Step(p, "∨E1", (0,))))
    with pytest.raises(TraceError):
        check_trace(bogus, prem, p)
    forward = DerivationTrace((Step(p, "∧E1", (1,)), Step(P("p & q"), "premise")))
    assert not verify_trace(forward, [P("p & q")], p)
    unknown = DerivationTrace((Step(P("p & q"), "premise"), Step(p, "magic", (0,))))
    assert not verify_trace(unknown, [P("p & q")], p)
    not_premise = DerivationTrace((Step(p, "premise"),))
    assert not verify_trace(not_premise, [q], p)
    assert verify_trace(derive0_trace([P("p & q")], p), [P("p & q")], p)
    assert len(RULES) == 19


@settings(max_examples=150, deadline=None)
@given(sentences(max_leaves=6), sentences(max_leaves=6))
def test_positive_decision_excludes_positive_negation(a, phi):
    if decides0(a, phi) is Decision.POSITIVE and not is_inconsistent0(a):
        assert not derives0([a], Neg(phi))


def test_derives_k_examples():
    taut = P("p | !p")
    assert derives_k([STAR], taut, 1)
    assert not derives_k([STAR], taut, 0)
    assert derives_k([], taut, 1)
    assert not derives_k(levesque_premises(), levesque_goal(), 0)
    assert derives_k(levesque_premises(), levesque_goal(), 1)
    with pytest.raises(ValueError):
        derives_k([], taut, -1)


def test_witness_tree_examples():
    tree = witness_tree(STAR, P("p | !p"), 1)
    assert sorted(str(n.info) for n in tree.leaves()) == ["!p", "p"]
    single = witness_tree(P("p & q"), p, 0)
    assert len(single.nodes) == 1
    lev = witness_tree(levesque_premises()[0], levesque_goal(), 1)
    assert [str(n.branch) for n in lev.nodes[1:]] == ["m_a", "!m_a"]
    assert witness_tree(STAR, P("p | !p"), 0) is None


@settings(max_examples=100, deadline=None)
@given(sentences(max_leaves=5), sentences(max_leaves=5), st.integers(0, 2))
def test_witness_leaves_derive_goal(root, goal, k):
    tree = witness_tree(root, goal, k)
    if tree is None:
        assert not derives_k([root], goal, k)
        return
    assert tree.depth <= k
    for leaf in tree.leaves():
        assert derives0([leaf.info], goal)


def test_hierarchy_and_soundness():
    rng = random.Random(11)
    for _ in range(150):
        prem = [random_sentence(rng, depth=2) for _ in range(rng.randint(0, 2))]
        goal = random_sentence(rng, depth=3)
        results = [derives_k(prem, goal, k) for k in range(4)]
        assert results == sorted(results)  # False ... True
        if results[-1]:
            assert entails(prem, goal)


def test_classical_limit_when_all_variables_are_branchable():
    rng = random.Random(5)
    checked = 0
    for _ in range(300):
        prem = [random_sentence(rng, depth=2) for _ in range(rng.randint(0, 2))]
        goal = random_sentence(rng, depth=2)
        names = set()
        for s in prem + [goal]:
            names |= {x for x in ("p", "q", "r") if Atom(x) in analytic_universe([s])}
        n = len(names)
        assert derives_k(prem, goal, n) == entails(prem, goal)
        checked += 1
    assert checked == 300


def test_negated_falsum_needs_no_premises():
    assert derives0([], Neg(BOT))
    assert derives0([STAR], P("!(p & _|_)"))
    assert not is_inconsistent0(P("p"))
    trace = derive0_trace([P("q")], P("q & !_|_"))
    check_trace(trace, [P("q")], P("q & !_|_"))
    assert any(step.rule == "¬⊥I" and not step.premises for step in trace.steps)
