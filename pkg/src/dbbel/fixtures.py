"""Worked scenarios used by the demos, the CLI ``demo`` command and the tests."""

from __future__ import annotations

from fractions import Fraction

from .belief import DbmStage, initial_stage, refine
from .solver import Problem, RawConstraint
from .syntax import Atom, Sentence, conjoin, disjoin, parse_sentence

__all__ = [
    "implies", "exclusive_background", "ellsberg_stages", "ellsberg_variant_stages",
    "levesque_premises", "levesque_goal", "hierarchy_problem", "ELLSBERG_QUERIES",
    "ellsberg_queries",
]


def implies(a: Sentence, b: Sentence) -> Sentence:
    return ~a | b


def exclusive_background(colours) -> Sentence:
    """Exactly one of ``colours`` holds: pairwise exclusion plus a left-nested disjunction."""
    atoms = [Atom(c) for c in colours]
    parts = []
    for a in atoms:
        others = [o for o in atoms if o != a]
        parts.append(implies(a, conjoin([~o for o in others])))
    parts.append(disjoin(atoms))
    return conjoin(parts)


def ellsberg_stages() -> list[DbmStage]:
    """Urn with 1/3 red and 2/3 yellow-or-green, refined once on yellow."""
    gamma = exclusive_background(["Y", "G", "R"])
    Y, G, R = Atom("Y"), Atom("G"), Atom("R")
    s0 = initial_stage([(Y | G) & gamma, R & gamma], [Fraction(2, 3), Fraction(1, 3)])
    s1 = refine(s0, {(0, 0): Y}, agenda=[Y, G, R])
    return [s0, s1]


def ellsberg_variant_stages() -> list[DbmStage]:
    """Four colours: half yellow-or-green, half white-or-red; refined on Y and W."""
    gamma = exclusive_background(["Y", "G", "R", "W"])
    Y, G, R, W = (Atom(c) for c in "YGRW")
    s0 = initial_stage([(Y | G) & gamma, (W | R) & gamma], [Fraction(1, 2), Fraction(1, 2)])
    s1 = refine(s0, {(0, 0): Y, (1, 0): W}, agenda=[Y, G, R, W])
    return [s0, s1]


ELLSBERG_QUERIES = {
    "ellsberg": ["Y", "G", "R", "Y | G", "Y | R", "G | R", "!Y"],
    "ellsberg-variant": ["Y", "G", "W", "R", "Y | G", "W | R", "Y | W", "G | R"],
}


def ellsberg_queries(name: str) -> list[Sentence]:
    """Queries reported by the urn demos, ending with the background sentence."""
    colours = ["Y", "G", "R"] if name == "ellsberg" else ["Y", "G", "R", "W"]
    return [parse_sentence(q) for q in ELLSBERG_QUERIES[name]] + [exclusive_background(colours)]


def levesque_premises() -> list[Sentence]:
    """Jack looks at Anne, Anne looks at George, Jack is married, George is not."""
    return [parse_sentence("l_ja & l_ag & m_j & !m_g")]


def levesque_goal() -> Sentence:
    """Some married person looks at an unmarried one."""
    return parse_sentence("((l_ja & m_j) & !m_a) | ((l_ag & m_a) & !m_g)")


def hierarchy_problem(depth: int) -> Problem:
    """``B(p) >= 1/2`` and ``B(q) >= 2/3`` with ``Supp = {p, q}``."""
    p, q = Atom("p"), Atom("q")
    raw = [RawConstraint(((Fraction(1), p),), ">=", Fraction(1, 2)),
           RawConstraint(((Fraction(1), q),), ">=", Fraction(2, 3))]
    return Problem.from_raw(raw, depth=depth)
