"""Mass functions on forest leaves and the depth-bounded belief/plausibility pair.

All values are exact :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .forest import (
    Forest, LeafId, expand, free_of_deep_contradictions, leaf_id_str, leaves, new_forest,
    parse_leaf_id,
)
from .proof import derives0, is_inconsistent0
from .syntax import STAR, Atom, Neg, Sentence, atoms_of_language

__all__ = [
    "MassError", "MassFunction", "DbmStage", "BeliefAssessment",
    "b_set", "pl_set", "belief_and_plausibility", "belief", "plausibility",
    "refine", "symmetric_split", "atom_forest_embedding", "atom_forest_sequence",
    "initial_stage", "check_refinement", "parse_fraction", "format_fraction",
]

Split = Union[Mapping[LeafId, tuple[Fraction, Fraction]], Callable[[LeafId, Fraction], tuple[Fraction, Fraction]]]


class MassError(ValueError):
    pass


def parse_fraction(text) -> Fraction:
    """Parse ``"n/d"`` or an integer string (ints and Fractions pass through)."""
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"rationals must be strings like '1/3', got {text!r}")
    try:
        num, _, den = text.strip().partition("/")
        return Fraction(int(num), int(den)) if den else Fraction(int(num))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"malformed rational {text!r}") from None


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class MassFunction:
    forest: Forest
    weights: Mapping[LeafId, Fraction]

    def __post_init__(self):
        ids = [lid for lid, _ in leaves(self.forest)]
        w = {lid: Fraction(self.weights.get(lid, 0)) for lid in ids}
        extra = set(self.weights) - set(ids)
        if extra:
            raise MassError(f"mass on non-leaves: {sorted(extra)}")
        if any(v < 0 for v in w.values()):
            raise MassError("negative mass")
        if sum(w.values()) != 1:
            raise MassError(f"masses sum to {sum(w.values())}, not 1")
        for lid, v in w.items():
            if v and is_inconsistent0(self.forest.leaf_info(lid)):
                raise MassError(f"0-inconsistent leaf {leaf_id_str(lid)} carries mass {v}")
        object.__setattr__(self, "weights", w)

    def __getitem__(self, leaf: LeafId) -> Fraction:
        return self.weights[leaf]

    def total(self, leaf_ids: Iterable[LeafId]) -> Fraction:
        return sum((self.weights[l] for l in leaf_ids), Fraction(0))

    def to_json(self) -> dict:
        return {"mass": {leaf_id_str(l): format_fraction(v) for l, v in self.weights.items()}}

    @classmethod
    def from_json(cls, forest: Forest, data: Mapping) -> MassFunction:
        try:
            raw = data["mass"]
        except (KeyError, TypeError):
            raise MassError("mass JSON needs a 'mass' object") from None
        return cls(forest, {parse_leaf_id(k): parse_fraction(v) for k, v in raw.items()})


@dataclass(frozen=True)
class DbmStage:
    """One stage of a depth-bounded mass sequence."""

    forest: Forest
    mass: MassFunction
    check_deep: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if self.mass.forest is not self.forest and self.mass.forest != self.forest:
            raise MassError("mass function belongs to a different forest")
        if self.check_deep and not free_of_deep_contradictions(self.forest):
            raise MassError("forest has a deep contradiction")

    @property
    def k(self) -> int:
        return self.forest.stage


@dataclass(frozen=True)
class BeliefAssessment:
    query: Sentence
    belief: Fraction
    plausibility: Fraction
    belief_witnesses: tuple[LeafId, ...]
    plausibility_witnesses: tuple[LeafId, ...]

    def to_json(self) -> dict:
        return {
            "query": str(self.query),
            "belief": format_fraction(self.belief),
            "plausibility": format_fraction(self.plausibility),
            "belief_witnesses": [leaf_id_str(l) for l in self.belief_witnesses],
            "plausibility_witnesses": [leaf_id_str(l) for l in self.plausibility_witnesses],
        }


def b_set(forest: Forest, query: Sentence) -> list[LeafId]:
    """Leaves that 0-derive ``query`` and are not 0-inconsistent."""
    return [lid for lid, info in leaves(forest)
            if not is_inconsistent0(info) and derives0([info], query)]


def pl_set(forest: Forest, query: Sentence) -> list[LeafId]:
    """Leaves that do not 0-derive the negation of ``query``."""
    nq = Neg(query)
    return [lid for lid, info in leaves(forest) if not derives0([info], nq)]


def belief_and_plausibility(stage: DbmStage, query: Sentence) -> BeliefAssessment:
    b = b_set(stage.forest, query)
    pl = pl_set(stage.forest, query)
    return BeliefAssessment(query, stage.mass.total(b), stage.mass.total(pl), tuple(b), tuple(pl))


def belief(stage: DbmStage, query: Sentence) -> Fraction:
    return stage.mass.total(b_set(stage.forest, query))


def plausibility(stage: DbmStage, query: Sentence) -> Fraction:
    return stage.mass.total(pl_set(stage.forest, query))


def initial_stage(supp: Sequence, masses: Sequence) -> DbmStage:
    """Stage 0 over ``supp`` with the given masses, in support order."""
    forest = new_forest(supp)
    if len(masses) != len(forest.trees):
        raise MassError("one mass per (deduplicated) support element is required")
    mass = MassFunction(forest, {(t, 0): Fraction(m) for t, m in enumerate(masses)})
    return DbmStage(forest, mass)


def symmetric_split(leaf: LeafId, parent_mass: Fraction) -> tuple[Fraction, Fraction]:
    """Halve the parent mass between the two children.

    Only one of many admissible policies; any split summing to the parent works.
    """
    return parent_mass / 2, parent_mass / 2


def refine(stage: DbmStage, choices: Mapping[LeafId, Sentence], split: Split = symmetric_split,
           agenda: Optional[Iterable[Sentence]] = None) -> DbmStage:
    """Expand ``stage.forest`` by ``choices`` and push masses down to the children.

    ``split`` maps a chosen leaf (or is called with the leaf and its mass) to the
    pair ``(mass of α∧β, mass of α∧¬β)``.  A 0-inconsistent child gets mass 0 and
    its sibling inherits the whole parent mass; an explicit split that disagrees
    with this raises :class:`MassError`.
    """
    forest = stage.forest
    new = expand(forest, choices, agenda)
    weights: dict[LeafId, Fraction] = {}
    for lid, _ in leaves(forest):
        parent_mass = stage.mass[lid]
        if lid not in choices:
            weights[lid] = parent_mass
            continue
        t, n = lid
        pos_id, neg_id = new.trees[t].nodes[n].children
        pos_inc = is_inconsistent0(new.trees[t].nodes[pos_id].info)
        neg_inc = is_inconsistent0(new.trees[t].nodes[neg_id].info)
        explicit = not callable(split)
        if explicit:
            if lid not in split:
                raise MassError(f"no split given for leaf {leaf_id_str(lid)}")
            a, b = (Fraction(x) for x in split[lid])
        else:
            a, b = (Fraction(x) for x in split(lid, parent_mass))
        if pos_inc and neg_inc and parent_mass:
            raise MassError(f"both children of {leaf_id_str(lid)} are 0-inconsistent")
        if pos_inc or neg_inc:
            forced = (Fraction(0), parent_mass) if pos_inc else (parent_mass, Fraction(0))
            if explicit and (a, b) != forced:
                raise MassError(f"split for {leaf_id_str(lid)} must be {forced} (a child is 0-inconsistent)")
            a, b = forced
        if a < 0 or b < 0:
            raise MassError(f"negative mass in split for {leaf_id_str(lid)}")
        if a + b != parent_mass:
            raise MassError(f"split for {leaf_id_str(lid)} sums to {a + b}, parent has {parent_mass}")
        weights[(t, pos_id)] = a
        weights[(t, neg_id)] = b
    return DbmStage(new, MassFunction(new, weights))


def check_refinement(prev: DbmStage, nxt: DbmStage) -> None:
    """Raise :class:`MassError` unless ``nxt`` refines ``prev``.

    Persisting leaves keep their mass; split leaves pass their mass to the children.
    """
    if nxt.forest.supp != prev.forest.supp or nxt.k != prev.k + 1:
        raise MassError("stages are not consecutive over the same support")
    for lid, _ in leaves(prev.forest):
        t, n = lid
        node = nxt.forest.trees[t].nodes[n]
        if not node.children:
            if nxt.mass[lid] != prev.mass[lid]:
                raise MassError(f"persisting leaf {leaf_id_str(lid)} changed mass")
        else:
            got = sum(nxt.mass[(t, c)] for c in node.children)
            if got != prev.mass[lid]:
                raise MassError(f"children of {leaf_id_str(lid)} carry {got}, parent had {prev.mass[lid]}")


def atom_forest_sequence(distribution: Mapping[Sentence, Fraction], vars: Sequence[str]) -> list[DbmStage]:
    """Stages 0..n of the ``*``-rooted forest branching on ``vars`` in order.

    The leaves of the last stage are the atoms of the language and carry their
    probabilities; earlier stages carry the induced marginals.
    """
    atoms = atoms_of_language(vars)
    dist = {a: Fraction(distribution.get(a, 0)) for a in atoms}
    if set(distribution) - set(atoms):
        raise MassError("distribution mentions sentences that are not atoms of the language")
    if any(v < 0 for v in dist.values()) or sum(dist.values()) != 1:
        raise MassError("not a probability distribution over the atoms")
    n = len(vars)
    # heap position -> probability of the literal prefix it represents
    prefix_mass: dict[tuple[bool, ...], Fraction] = {}
    for bits, a in zip(_sign_vectors(n), atoms):
        for j in range(n + 1):
            prefix_mass[bits[:j]] = prefix_mass.get(bits[:j], Fraction(0)) + dist[a]

    forest = new_forest([STAR])
    node_prefix = {(0, 0): ()}
    stages = [DbmStage(forest, MassFunction(forest, {(0, 0): Fraction(1)}), check_deep=False)]
    for j, v in enumerate(vars):
        choices = {lid: Atom(v) for lid, _ in leaves(forest)}
        forest = expand(forest, choices, agenda=())
        new_prefix = {}
        for (t, nid), pre in node_prefix.items():
            node = forest.trees[t].nodes[nid]
            if node.children:
                new_prefix[(t, node.children[0])] = pre + (True,)
                new_prefix[(t, node.children[1])] = pre + (False,)
        node_prefix = new_prefix
        mass = MassFunction(forest, {lid: prefix_mass[node_prefix[lid]] for lid, _ in leaves(forest)})
        # literal conjunctions over distinct variables are never deep contradictions
        stages.append(DbmStage(forest, mass, check_deep=False))
    return stages


def _sign_vectors(n: int):
    return list(itertools.product((True, False), repeat=n))


def atom_forest_embedding(distribution: Mapping[Sentence, Fraction], vars: Sequence[str]) -> DbmStage:
    """Final stage of :func:`atom_forest_sequence`: leaves are atoms with mass P(atom)."""
    return atom_forest_sequence(distribution, vars)[-1]
