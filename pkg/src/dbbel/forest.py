"""Depth-bounded trees and forests of hypothetical information.

A tree grows by splitting a leaf ``α`` into ``α ∧ β`` and ``α ∧ ¬β``.  A forest
holds one tree per support sentence and a stage counter.  Leaves are addressed
by ``(tree index, node id)`` pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .proof import Decision, decides0, is_inconsistent0
from .syntax import (
    STAR, Conj, Neg, Root, Sentence, classical_entails, BOT,
    parse_root, parse_sentence, print_root, sentence_key, subsentences,
)

__all__ = [
    "ForestError", "TreeNode", "Tree", "Forest", "LeafId",
    "new_forest", "expand", "leaves", "is_closed", "is_tree_closed", "is_maximal",
    "decided_share", "decided_count", "free_of_deep_contradictions",
    "enumerate_uniform_analytic", "select_pareto_maximal", "default_agenda",
    "leaf_id_str", "parse_leaf_id",
]

LeafId = tuple[int, int]


class ForestError(ValueError):
    pass


@dataclass(frozen=True)
class TreeNode:
    id: int
    parent: Optional[int]
    branch: Optional[Sentence]  # β or ¬β; None at the root
    children: tuple[int, ...]
    depth: int
    info: Root  # root conjoined left-to-right with the branch labels on the path


def _extend_info(info: Root, label: Sentence) -> Sentence:
    return label if info is STAR else Conj(info, label)


@dataclass(frozen=True)
class Tree:
    root: Root
    nodes: tuple[TreeNode, ...]

    root_id = 0

    @classmethod
    def single(cls, root: Root) -> Tree:
        return cls(root, (TreeNode(0, None, None, (), 0, root),))

    @property
    def depth(self) -> int:
        return max(n.depth for n in self.nodes)

    def node(self, node_id: int) -> TreeNode:
        return self.nodes[node_id]

    def information(self, node_id: int) -> Root:
        return self.nodes[node_id].info

    def leaves(self) -> list[TreeNode]:
        return [n for n in self.nodes if not n.children]

    def branch(self, node_id: int, beta: Sentence) -> tuple[Tree, tuple[int, int]]:
        """Split leaf ``node_id`` on ``beta``; returns the new tree and child ids."""
        if not 0 <= node_id < len(self.nodes):
            raise ForestError(f"no node {node_id}")
        parent = self.nodes[node_id]
        if parent.children:
            raise ForestError(f"node {node_id} is not a leaf")
        pos_id, neg_id = len(self.nodes), len(self.nodes) + 1
        nodes = list(self.nodes)
        nodes[node_id] = TreeNode(parent.id, parent.parent, parent.branch, (pos_id, neg_id), parent.depth, parent.info)
        for nid, label in ((pos_id, beta), (neg_id, Neg(beta))):
            nodes.append(TreeNode(nid, node_id, label, (), parent.depth + 1, _extend_info(parent.info, label)))
        return Tree(self.root, tuple(nodes)), (pos_id, neg_id)

    def to_json(self) -> dict:
        return {
            "root": print_root(self.root),
            "nodes": [
                {"id": n.id, "parent": n.parent, "branch": None if n.branch is None else str(n.branch)}
                for n in self.nodes
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping, *, implication: bool = False) -> Tree:
        root = parse_root(data["root"], implication=implication)
        raw = sorted(data["nodes"], key=lambda d: d["id"])
        if not raw or [d["id"] for d in raw] != list(range(len(raw))):
            raise ForestError("node ids must be 0..n-1")
        if raw[0]["parent"] is not None or raw[0].get("branch") is not None:
            raise ForestError("node 0 must be the root")
        kids: dict[int, list[dict]] = {}
        for d in raw[1:]:
            if d["parent"] is None or not 0 <= d["parent"] < d["id"]:
                raise ForestError(f"node {d['id']}: parent must be an earlier node")
            kids.setdefault(d["parent"], []).append(d)
        tree = cls.single(root)
        mapping = {0: 0}
        for pid in sorted(kids):
            pair = kids[pid]
            if len(pair) != 2:
                raise ForestError(f"node {pid} must have exactly two children")
            a, b = (parse_sentence(d["branch"], implication=implication) for d in pair)
            if b == Neg(a):
                pos, neg = pair
                beta = a
            elif a == Neg(b):
                neg, pos = pair
                beta = b
            else:
                raise ForestError(f"children of node {pid} are not labelled β and ¬β")
            tree, (p, n) = tree.branch(mapping[pid], beta)
            mapping[pos["id"]] = p
            mapping[neg["id"]] = n
        if any(mapping[i] != i for i in mapping):
            # renumber so ids follow the input file
            inv = {new: old for old, new in mapping.items()}
            nodes = []
            for old in range(len(raw)):
                n = tree.nodes[mapping[old]]
                nodes.append(TreeNode(old, None if n.parent is None else inv[n.parent], n.branch,
                                      tuple(inv[c] for c in n.children), n.depth, n.info))
            tree = cls(root, tuple(nodes))
        return tree


@dataclass(frozen=True)
class Forest:
    supp: tuple[Root, ...]
    trees: tuple[Tree, ...]
    stage: int = 0

    def leaves(self) -> list[tuple[LeafId, Root]]:
        return leaves(self)

    def leaf_info(self, leaf: LeafId) -> Root:
        t, n = leaf
        return self.trees[t].nodes[n].info

    def leaf_depth(self, leaf: LeafId) -> int:
        t, n = leaf
        return self.trees[t].nodes[n].depth

    def to_json(self) -> dict:
        return {
            "supp": [print_root(r) for r in self.supp],
            "stage": self.stage,
            "trees": [t.to_json() for t in self.trees],
        }

    @classmethod
    def from_json(cls, data: Mapping, *, implication: bool = False) -> Forest:
        supp = tuple(parse_root(s, implication=implication) for s in data["supp"])
        trees = tuple(Tree.from_json(t, implication=implication) for t in data["trees"])
        if len(trees) != len(supp) or any(t.root != r for t, r in zip(trees, supp)):
            raise ForestError("trees must be listed in support order, one per support element")
        _check_supp(supp)
        stage = data.get("stage", max(t.depth for t in trees))
        if stage < max(t.depth for t in trees):
            raise ForestError("stage is smaller than the deepest tree")
        return cls(supp, trees, stage)


def leaf_id_str(leaf: LeafId) -> str:
    return f"{leaf[0]}.{leaf[1]}"


def parse_leaf_id(text: str) -> LeafId:
    try:
        t, n = text.split(".")
        return int(t), int(n)
    except ValueError:
        raise ForestError(f"malformed leaf id {text!r}") from None


def _check_supp(supp: Sequence[Root]) -> None:
    if not supp:
        raise ForestError("support must be nonempty")
    if STAR in supp and len(supp) > 1:
        raise ForestError("'*' may only appear as the sole support element")
    if all(r is not STAR and is_inconsistent0(r) for r in supp):
        raise ForestError("support has no 0-consistent element")


def new_forest(supp: Iterable[Root]) -> Forest:
    """Stage-0 forest with one single-node tree per (deduplicated) support element."""
    uniq: list[Root] = []
    for r in supp:
        if r not in uniq:
            uniq.append(r)
    _check_supp(uniq)
    return Forest(tuple(uniq), tuple(Tree.single(r) for r in uniq), 0)


def default_agenda(supp: Iterable[Root]) -> list[Sentence]:
    return subsentences(r for r in supp if r is not STAR)


def leaves(forest: Forest) -> list[tuple[LeafId, Root]]:
    """Leaves in canonical order (tree index, then node id) with their information."""
    out = []
    for t, tree in enumerate(forest.trees):
        for n in tree.nodes:
            if not n.children:
                out.append(((t, n.id), n.info))
    return out


def is_tree_closed(tree: Tree, targets: Iterable[Sentence]) -> bool:
    targets = list(targets)
    return all(decides0(n.info, phi) is not Decision.UNDECIDED for n in tree.leaves() for phi in targets)


def expand(forest: Forest, choices: Mapping[LeafId, Sentence],
           agenda: Optional[Iterable[Sentence]] = None) -> Forest:
    """Next-stage forest obtained by splitting each chosen leaf on its sentence.

    Every tree must split at least one leaf whose depth equals the current stage,
    unless it already decides every sentence of ``agenda`` (default: the
    subsentences of the support), in which case it may be left untouched.
    """
    by_tree: dict[int, list[tuple[int, Sentence]]] = {}
    for (t, n), beta in choices.items():
        if not 0 <= t < len(forest.trees):
            raise ForestError(f"no tree {t}")
        tree = forest.trees[t]
        if not 0 <= n < len(tree.nodes):
            raise ForestError(f"tree {t} has no node {n}")
        if tree.nodes[n].children:
            raise ForestError(f"node {t}.{n} is not a leaf")
        if not isinstance(beta, Sentence):
            raise ForestError(f"branch for {t}.{n} must be a sentence")
        by_tree.setdefault(t, []).append((n, beta))

    agenda_list = None
    trees = []
    for t, tree in enumerate(forest.trees):
        picks = sorted(by_tree.get(t, []), key=lambda x: x[0])
        if not any(tree.nodes[n].depth == forest.stage for n, _ in picks):
            if agenda_list is None:
                agenda_list = list(agenda) if agenda is not None else default_agenda(forest.supp)
            if not is_tree_closed(tree, agenda_list):
                if picks:
                    raise ForestError(f"tree {t} must split a leaf of depth {forest.stage}")
                raise ForestError(f"tree {t} is not closed and has no branching choice")
            if picks:
                raise ForestError(f"tree {t} is closed; it cannot grow without a leaf of depth {forest.stage}")
        for n, beta in picks:
            tree, _ = tree.branch(n, beta)
        trees.append(tree)
    return Forest(forest.supp, tuple(trees), forest.stage + 1)


def is_closed(forest: Forest, target: Sentence) -> bool:
    """Every leaf of every tree decides ``target``."""
    return all(decides0(info, target) is not Decision.UNDECIDED for _, info in leaves(forest))


def decided_count(tree: Tree, target: Sentence) -> int:
    return sum(1 for n in tree.leaves() if decides0(n.info, target) is not Decision.UNDECIDED)


def decided_share(tree: Tree, target: Sentence) -> Fraction:
    """Sum of ``2**-depth`` over the leaves deciding ``target``.

    Equals ``decided_count / 2**depth`` on complete trees and is 1 exactly when
    the tree is closed for ``target``.
    """
    return sum((Fraction(1, 2 ** n.depth) for n in tree.leaves()
                if decides0(n.info, target) is not Decision.UNDECIDED), Fraction(0))


def _check_compatible(forest: Forest, candidates: Sequence[Forest]) -> None:
    for c in candidates:
        if c.supp != forest.supp or c.stage != forest.stage:
            raise ForestError("candidates must share support and stage")


def is_maximal(forest: Forest, target: Sentence, candidates: Sequence[Forest]) -> bool:
    """No candidate's same-root tree decides ``target`` on a larger share of leaves."""
    _check_compatible(forest, candidates)
    for t, tree in enumerate(forest.trees):
        mine = decided_share(tree, target)
        if mine == 1:
            continue
        if any(decided_share(c.trees[t], target) > mine for c in candidates):
            return False
    return True


def free_of_deep_contradictions(forest: Forest, *, bound: Optional[int] = None) -> bool:
    """Every classically inconsistent leaf is already 0-inconsistent."""
    for _, info in leaves(forest):
        if info is STAR:
            continue
        if classical_entails([info], BOT, bound=bound) and not is_inconsistent0(info):
            return False
    return True


def enumerate_uniform_analytic(supp: Sequence[Root], k: int,
                               agenda: Optional[Iterable[Sentence]] = None,
                               pool: Optional[Iterable[Sentence]] = None) -> list[Forest]:
    """All uniform forests of stage ``k`` whose branch sentences come from ``pool``.

    A complete binary skeleton with ``2**k - 1`` internal positions receives one
    sentence per position and is replicated under every root.  Trees that already
    decide the whole agenda stop growing.  ``pool`` defaults to the subsentences
    of the support (of the agenda when the support is ``*``); ``agenda`` defaults
    to the subsentences of the support.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    base = new_forest(supp)
    agenda = list(agenda) if agenda is not None else default_agenda(base.supp)
    if pool is None:
        pool = default_agenda(base.supp) or subsentences(agenda)
    pool = sorted(set(pool), key=sentence_key)
    ntrees = len(base.trees)
    out: list[Forest] = []
    seen: set = set()

    def rec(forest: Forest, level: int, posmap: list[dict[int, int]]):
        if level == k:
            key = forest.trees
            if key not in seen:
                seen.add(key)
                out.append(forest)
            return
        open_trees = [t for t in range(ntrees) if not is_tree_closed(forest.trees[t], agenda)]
        if not open_trees:
            rec(Forest(forest.supp, forest.trees, forest.stage + 1), level + 1, posmap)
            return
        if not pool:
            return
        positions = range(2 ** level, 2 ** (level + 1))
        for combo in itertools.product(pool, repeat=len(positions)):
            trees = list(forest.trees)
            newmap = [dict(m) for m in posmap]
            for t in open_trees:
                tree = trees[t]
                for pos, beta in zip(positions, combo):
                    tree, (a, b) = tree.branch(posmap[t][pos], beta)
                    newmap[t][2 * pos] = a
                    newmap[t][2 * pos + 1] = b
                trees[t] = tree
            rec(Forest(forest.supp, tuple(trees), forest.stage + 1), level + 1, newmap)

    rec(base, 0, [{1: 0} for _ in range(ntrees)])
    return out


def _share_vector(forest: Forest, agenda: Sequence[Sentence]) -> tuple[Fraction, ...]:
    return tuple(decided_share(tree, phi) for tree in forest.trees for phi in agenda)


def select_pareto_maximal(candidates: Sequence[Forest], agenda: Iterable[Sentence]) -> list[Forest]:
    """Candidates not dominated on every (tree, agenda sentence) decided share."""
    if not candidates:
        return []
    _check_compatible(candidates[0], candidates)
    agenda = list(agenda)
    vecs = [_share_vector(c, agenda) for c in candidates]
    keep = []
    for i, v in enumerate(vecs):
        dominated = False
        for j, w in enumerate(vecs):
            if j != i and w != v and all(a >= b for a, b in zip(w, v)):
                dominated = True
                break
        if not dominated:
            keep.append(candidates[i])
    return keep
