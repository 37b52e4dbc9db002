"""Independent reference implementations used only by the tests.

Nothing here calls into the package's inference code; sentences are inspected
through their public constructors only.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from dbbel.syntax import BOT, Atom, Bot, Conj, Disj, Neg


def atoms_in(s, acc=None):
    acc = set() if acc is None else acc
    if isinstance(s, Atom):
        acc.add(s.name)
    for c in s.children():
        atoms_in(c, acc)
    return acc


def evaluate(s, val) -> bool:
    if isinstance(s, Atom):
        return val[s.name]
    if isinstance(s, Bot):
        return False
    if isinstance(s, Neg):
        return not evaluate(s.child, val)
    if isinstance(s, Conj):
        return evaluate(s.left, val) and evaluate(s.right, val)
    return evaluate(s.left, val) or evaluate(s.right, val)


def valuations(names):
    names = sorted(names)
    for bits in itertools.product((True, False), repeat=len(names)):
        yield dict(zip(names, bits))


def entails(premises, goal) -> bool:
    names = set()
    for s in list(premises) + [goal]:
        atoms_in(s, names)
    return all(evaluate(goal, v) for v in valuations(names)
               if all(evaluate(p, v) for p in premises))


def probability(s, dist: dict) -> Fraction:
    """``dist`` maps full valuations (as sorted tuples of (name, bool)) to mass."""
    return sum((m for key, m in dist.items() if evaluate(s, dict(key))), Fraction(0))


def subformulas(s, acc=None):
    acc = set() if acc is None else acc
    acc.add(s)
    for c in s.children():
        subformulas(c, acc)
    return acc


def universe(sentences, widen: bool = False):
    """Subformulas, their negations and falsum; ``widen`` adds double negations."""
    base = set()
    for s in sentences:
        subformulas(s, base)
    out = set(base) | {Neg(x) for x in base} | {BOT}
    if widen:
        out |= {Neg(Neg(x)) for x in base}
    return out


def naive_derives0(premises, goal, widen: bool = False) -> bool:
    """Round-by-round saturation of every intro/elim rule over a fixed universe.

    Each round checks every candidate conclusion against the current set, so
    this is quadratic per round and far slower than the package engine, but it
    shares no code or data structures with it.
    """
    premises = list(premises)
    U = universe(premises + [goal], widen)
    known = set(p for p in premises if p in U)
    while True:
        if BOT in known:
            return True
        new = set()
        for c in U:
            if c in known:
                continue
            if _introducible(c, known) or _eliminable(c, known):
                new.add(c)
        if not new:
            return goal in known
        known |= new


def _introducible(c, known) -> bool:
    if isinstance(c, Bot):
        return any(Neg(x) in known for x in known)
    if isinstance(c, Conj):
        return c.left in known and c.right in known
    if isinstance(c, Disj):
        return c.left in known or c.right in known
    if isinstance(c, Neg):
        g = c.child
        if isinstance(g, Bot):
            return True
        if isinstance(g, Neg):
            return g.child in known
        if isinstance(g, Conj):
            return Neg(g.left) in known or Neg(g.right) in known
        if isinstance(g, Disj):
            return Neg(g.left) in known and Neg(g.right) in known
    return False


def _eliminable(c, known) -> bool:
    for f in known:
        if isinstance(f, Conj) and c in (f.left, f.right):
            return True
        if isinstance(f, Disj):
            if c == f.right and Neg(f.left) in known:
                return True
            if c == f.left and Neg(f.right) in known:
                return True
        if isinstance(f, Neg):
            g = f.child
            if isinstance(g, Neg) and c == g.child:
                return True
            if isinstance(g, Disj) and c in (Neg(g.left), Neg(g.right)):
                return True
            if isinstance(g, Conj):
                if c == Neg(g.right) and g.left in known:
                    return True
                if c == Neg(g.left) and g.right in known:
                    return True
    return False
