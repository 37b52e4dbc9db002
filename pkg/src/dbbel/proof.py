"""Depth-bounded derivability.

``derives0`` decides the 0-depth consequence relation by forward saturation of
the introduction/elimination rules over the analytic universe of the query
(subsentences of premises and goal, their negations, and falsum).  ``derives_k``
adds up to ``k`` nested case splits on subsentences.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import Iterable, Optional

from .syntax import (
    BOT, STAR, Bot, Conj, Disj, Neg, Root, Sentence,
    parse_sentence, sentence_key, subsentences,
)

__all__ = [
    "RULES", "Step", "DerivationTrace", "TraceError", "Closure", "Decision",
    "closure0", "derives0", "derive0_trace", "is_inconsistent0", "decides0",
    "decided_subset", "inc_subset", "derives_k", "witness_tree", "check_trace",
    "verify_trace", "analytic_universe",
]

RULES = (
    "∧I", "¬∧I1", "¬∧I2", "¬∨I", "∨I1", "∨I2", "⊥I", "¬¬I",
    "∨E1", "∨E2", "¬∨E1", "¬∨E2", "∧E1", "∧E2", "¬∧E1", "¬∧E2", "¬¬E", "⊥E", "¬⊥I",
)


@dataclass(frozen=True)
class Step:
    sentence: Sentence
    rule: str  # a name from RULES, or "premise"
    premises: tuple[int, ...] = ()


@dataclass(frozen=True)
class DerivationTrace:
    steps: tuple[Step, ...]

    def __len__(self):
        return len(self.steps)

    @property
    def conclusion(self) -> Sentence:
        return self.steps[-1].sentence

    def to_json(self) -> list[dict]:
        return [
            {"index": i, "sentence": str(s.sentence), "rule": s.rule, "premises": list(s.premises)}
            for i, s in enumerate(self.steps)
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> DerivationTrace:
        return cls(tuple(
            Step(parse_sentence(d["sentence"]), d["rule"], tuple(d.get("premises", ())))
            for d in data
        ))


def _premise_set(premises: Iterable[Root]) -> frozenset[Sentence]:
    if isinstance(premises, (Sentence,)) or premises is STAR:
        premises = [premises]
    return frozenset(p for p in premises if p is not STAR)


def analytic_universe(sentences: Iterable[Sentence]) -> frozenset[Sentence]:
    """Subsentences of ``sentences``, their negations, and falsum."""
    sub = subsentences(sentences)
    return frozenset(sub) | frozenset(Neg(s) for s in sub) | {BOT}


class Closure:
    """Everything 0-derivable from a premise set inside a fixed universe.

    Each derived sentence carries its provenance ``(order, rule, premise sentences)``.
    """

    __slots__ = ("premises", "universe", "derived", "inconsistent")

    def __init__(self, premises: frozenset[Sentence], universe: frozenset[Sentence]):
        self.premises = premises
        self.universe = universe
        self.derived: dict[Sentence, tuple[int, str, tuple[Sentence, ...]]] = {}
        self.inconsistent = False
        self._saturate()

    def _saturate(self):
        U = self.universe
        parents: dict[Sentence, list[Sentence]] = {}
        for u in U:
            for c in u.children():
                parents.setdefault(c, []).append(u)
        derived = self.derived
        queue: list[Sentence] = []

        def add(f, rule, prem=()):
            if f in derived or f not in U:
                return
            derived[f] = (len(derived), rule, prem)
            queue.append(f)

        for p in sorted(self.premises, key=sentence_key):
            add(p, "premise")
        # falsum is never true, so its negation holds on no information at all
        add(Neg(BOT), "¬⊥I")

        qi = 0
        while qi < len(queue):
            f = queue[qi]
            qi += 1
            if type(f) is Bot:
                self.inconsistent = True
                return
            nf = Neg(f)
            # ⊥I with f as either premise
            if nf in derived:
                add(BOT, "⊥I", (f, nf))
            if type(f) is Neg and f.child in derived:
                add(BOT, "⊥I", (f.child, f))

            # eliminations with f as major premise
            t = type(f)
            if t is Conj:
                add(f.left, "∧E1", (f,))
                add(f.right, "∧E2", (f,))
            elif t is Disj:
                if Neg(f.left) in derived:
                    add(f.right, "∨E1", (f, Neg(f.left)))
                if Neg(f.right) in derived:
                    add(f.left, "∨E2", (f, Neg(f.right)))
            elif t is Neg:
                g = f.child
                tg = type(g)
                if tg is Neg:
                    add(g.child, "¬¬E", (f,))
                elif tg is Disj:
                    add(Neg(g.left), "¬∨E1", (f,))
                    add(Neg(g.right), "¬∨E2", (f,))
                elif tg is Conj:
                    if g.left in derived:
                        add(Neg(g.right), "¬∧E1", (f, g.left))
                    if g.right in derived:
                        add(Neg(g.left), "¬∧E2", (f, g.right))

            # ¬¬I
            if nf in U:
                add(Neg(nf), "¬¬I", (f,))

            # f as component of a larger sentence
            for P in parents.get(f, ()):
                tp = type(P)
                if tp is Conj:
                    if P.left in derived and P.right in derived:
                        add(P, "∧I", (P.left, P.right))
                    nP = Neg(P)
                    if nP in derived:
                        if f == P.left:
                            add(Neg(P.right), "¬∧E1", (nP, f))
                        if f == P.right:
                            add(Neg(P.left), "¬∧E2", (nP, f))
                elif tp is Disj:
                    if f == P.left:
                        add(P, "∨I1", (f,))
                    if f == P.right:
                        add(P, "∨I2", (f,))

            if t is Neg:
                g = f.child
                for Q in parents.get(g, ()):
                    tq = type(Q)
                    if tq is Conj:
                        if g == Q.left:
                            add(Neg(Q), "¬∧I1", (f,))
                        if g == Q.right:
                            add(Neg(Q), "¬∧I2", (f,))
                    elif tq is Disj:
                        nl, nr = Neg(Q.left), Neg(Q.right)
                        if nl in derived and nr in derived:
                            add(Neg(Q), "¬∨I", (nl, nr))
                        if Q in derived:
                            if g == Q.left:
                                add(Q.right, "∨E1", (Q, f))
                            if g == Q.right:
                                add(Q.left, "∨E2", (Q, f))

    def derives(self, s: Sentence) -> bool:
        if s not in self.universe:
            raise ValueError(f"{s} lies outside this closure's universe")
        return self.inconsistent or s in self.derived

    def decides(self, s: Sentence) -> bool:
        return self.derives(s) or self.derives(Neg(s))

    def trace(self, goal: Sentence) -> Optional[DerivationTrace]:
        """Pruned derivation of ``goal``, or None if it is not derivable."""
        if not self.derives(goal):
            return None
        target = goal if goal in self.derived else BOT
        needed: set[Sentence] = set()
        stack = [target]
        while stack:
            s = stack.pop()
            if s in needed:
                continue
            needed.add(s)
            stack.extend(self.derived[s][2])
        order = sorted(needed, key=lambda s: self.derived[s][0])
        index = {s: i for i, s in enumerate(order)}
        steps = [Step(s, self.derived[s][1], tuple(index[p] for p in self.derived[s][2])) for s in order]
        if target != goal:
            steps.append(Step(goal, "⊥E", (index[BOT],)))
        return DerivationTrace(tuple(steps))


@functools.lru_cache(maxsize=1 << 16)
def _closure(premises: frozenset[Sentence], extra: frozenset[Sentence]) -> Closure:
    return Closure(premises, analytic_universe(premises | extra))


def closure0(premises: Iterable[Root], extra: Iterable[Sentence] = ()) -> Closure:
    """Saturated 0-depth closure of ``premises`` over U(premises ∪ extra)."""
    return _closure(_premise_set(premises), frozenset(extra))


def derives0(premises: Iterable[Root], goal: Sentence) -> bool:
    """Whether ``premises ⊢₀ goal``.  ``STAR`` premises contribute nothing."""
    return _closure(_premise_set(premises), frozenset((goal,))).derives(goal)


def derive0_trace(premises: Iterable[Root], goal: Sentence) -> Optional[DerivationTrace]:
    return _closure(_premise_set(premises), frozenset((goal,))).trace(goal)


def is_inconsistent0(info: Root) -> bool:
    return derives0([info], BOT)


class Decision(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    UNDECIDED = "undecided"


def decides0(info: Root, target: Sentence) -> Decision:
    c = closure0([info], (target, Neg(target)))
    if c.derives(target):
        return Decision.POSITIVE
    if c.derives(Neg(target)):
        return Decision.NEGATIVE
    return Decision.UNDECIDED


def decided_subset(candidates: Iterable[Root], target: Sentence) -> list[Root]:
    return [a for a in candidates if decides0(a, target) is not Decision.UNDECIDED]


def inc_subset(candidates: Iterable[Root]) -> list[Root]:
    return [a for a in candidates if is_inconsistent0(a)]


# ---------------------------------------------------------------------------
# k-depth

class _KSearch:
    """Memoised search for ⊢ₖ with a fixed pool of branching sentences."""

    def __init__(self, premises: frozenset[Sentence], goal: Sentence):
        self.goal = goal
        self.pool = tuple(subsentences(list(premises) + [goal]))
        self.extra = frozenset(self.pool)
        self.memo: dict[tuple[frozenset, int], tuple[bool, Optional[Sentence]]] = {}

    def run(self, prem: frozenset[Sentence], k: int) -> bool:
        key = (prem, k)
        hit = self.memo.get(key)
        if hit is not None:
            return hit[0]
        c = _closure(prem, self.extra)
        if c.derives(self.goal):
            res = (True, None)
        elif k == 0:
            res = (False, None)
        elif self.run(prem, k - 1):
            res = (True, None)
        else:
            res = (False, None)
            for b in self.pool:
                # splitting on an already decided sentence reproduces the parent
                if c.decides(b):
                    continue
                if self.run(prem | {b}, k - 1) and self.run(prem | {Neg(b)}, k - 1):
                    res = (True, b)
                    break
        self.memo[key] = res
        return res[0]

    def split(self, prem: frozenset[Sentence], k: int) -> tuple[Optional[Sentence], int]:
        """Branch sentence used at ``prem`` with budget ``k`` and the budget it was found at.

        The sentence is None for a leaf.
        """
        while k > 0:
            ok, b = self.memo[(prem, k)]
            assert ok
            if b is not None:
                return b, k
            if _closure(prem, self.extra).derives(self.goal):
                return None, 0
            k -= 1
        return None, 0


@functools.lru_cache(maxsize=1 << 14)
def _derives_k(premises: frozenset[Sentence], goal: Sentence, k: int) -> bool:
    return _KSearch(premises, goal).run(premises, k)


def derives_k(premises: Iterable[Root], goal: Sentence, k: int) -> bool:
    """Whether ``premises ⊢ₖ goal``.

    Branch sentences range over the subsentences of the original premises and
    goal at every level of the recursion.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    return _derives_k(_premise_set(premises), goal, k)


def witness_tree(root: Root, goal: Sentence, k: int):
    """A tree of depth ≤ k rooted at ``root`` whose leaves all 0-derive ``goal``.

    Returns None when ``root ⊢ₖ goal`` fails.
    """
    from .forest import Tree

    prem = _premise_set([root])
    search = _KSearch(prem, goal)
    if not search.run(prem, k):
        return None
    tree = Tree.single(root)
    frontier = [(tree.root_id, prem, k)]
    while frontier:
        node, p, budget = frontier.pop(0)
        b, level = search.split(p, budget)
        if b is None:
            continue
        tree, (pos, neg) = tree.branch(node, b)
        frontier.append((pos, p | {b}, level - 1))
        frontier.append((neg, p | {Neg(b)}, level - 1))
    return tree


# ---------------------------------------------------------------------------
# Trace checking

class TraceError(ValueError):
    pass


def _rule_ok(rule: str, concl: Sentence, prem: list[Sentence]) -> bool:
    def is_neg_of(x, y):  # x == ¬y
        return type(x) is Neg and x.child == y

    n = len(prem)
    if rule == "∧I":
        return n == 2 and type(concl) is Conj and concl.left == prem[0] and concl.right == prem[1]
    if rule in ("¬∧I1", "¬∧I2"):
        if n != 1 or not is_neg_of(concl, getattr(concl, "child", None)) or type(concl.child) is not Conj:
            return False
        part = concl.child.left if rule == "¬∧I1" else concl.child.right
        return is_neg_of(prem[0], part)
    if rule == "¬∨I":
        return (n == 2 and type(concl) is Neg and type(concl.child) is Disj
                and is_neg_of(prem[0], concl.child.left) and is_neg_of(prem[1], concl.child.right))
    if rule in ("∨I1", "∨I2"):
        if n != 1 or type(concl) is not Disj:
            return False
        return prem[0] == (concl.left if rule == "∨I1" else concl.right)
    if rule == "⊥I":
        return n == 2 and type(concl) is Bot and is_neg_of(prem[1], prem[0])
    if rule == "¬¬I":
        return n == 1 and type(concl) is Neg and is_neg_of(concl.child, prem[0])
    if rule in ("∨E1", "∨E2"):
        if n != 2 or type(prem[0]) is not Disj:
            return False
        d = prem[0]
        if rule == "∨E1":
            return is_neg_of(prem[1], d.left) and concl == d.right
        return is_neg_of(prem[1], d.right) and concl == d.left
    if rule in ("¬∨E1", "¬∨E2"):
        if n != 1 or type(prem[0]) is not Neg or type(prem[0].child) is not Disj:
            return False
        d = prem[0].child
        return is_neg_of(concl, d.left if rule == "¬∨E1" else d.right)
    if rule in ("∧E1", "∧E2"):
        if n != 1 or type(prem[0]) is not Conj:
            return False
        return concl == (prem[0].left if rule == "∧E1" else prem[0].right)
    if rule in ("¬∧E1", "¬∧E2"):
        if n != 2 or type(prem[0]) is not Neg or type(prem[0].child) is not Conj:
            return False
        c = prem[0].child
        if rule == "¬∧E1":
            return prem[1] == c.left and is_neg_of(concl, c.right)
        return prem[1] == c.right and is_neg_of(concl, c.left)
    if rule == "¬¬E":
        return n == 1 and type(prem[0]) is Neg and type(prem[0].child) is Neg and prem[0].child.child == concl
    if rule == "⊥E":
        return n == 1 and type(prem[0]) is Bot
    if rule == "¬⊥I":
        return n == 0 and concl == Neg(BOT)
    return False


def check_trace(trace: DerivationTrace, premises: Iterable[Root], goal: Optional[Sentence] = None) -> None:
    """Raise :class:`TraceError` unless every step is a valid rule application."""
    prem = _premise_set(premises)
    for i, step in enumerate(trace.steps):
        if any(j < 0 or j >= i for j in step.premises):
            raise TraceError(f"step {i} cites a step that is not earlier")
        if step.rule == "premise":
            if step.sentence not in prem:
                raise TraceError(f"step {i}: {step.sentence} is not a premise")
            continue
        cited = [trace.steps[j].sentence for j in step.premises]
        if not _rule_ok(step.rule, step.sentence, cited):
            raise TraceError(f"step {i}: invalid {step.rule} application yielding {step.sentence}")
    if goal is not None and (not trace.steps or trace.conclusion != goal):
        raise TraceError(f"trace does not end in {goal}")


def verify_trace(trace: DerivationTrace, premises: Iterable[Root], goal: Optional[Sentence] = None) -> bool:
    try:
        check_trace(trace, premises, goal)
    except TraceError:
        return False
    return True

