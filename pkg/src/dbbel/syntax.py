"""Propositional sentences: AST, parser, printer, subsentences and a truth-table oracle.

Sentences are immutable and hashable with cached hashes, so they can be used as
dictionary keys and memo-table entries throughout the package.
"""

from __future__ import annotations

import itertools
import os
import re
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

__all__ = [
    "Sentence", "Atom", "Neg", "Conj", "Disj", "Bot", "BOT", "Star", "STAR", "Root",
    "ParseError", "OracleBoundError",
    "parse_sentence", "parse_root", "print_sentence", "print_root",
    "subsentences", "atoms_of_language", "variables", "conjoin", "disjoin",
    "eval_classical", "truth_table", "classical_entails", "is_classically_consistent",
    "sentence_key", "brute_force_bound",
]

_ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Sentence:
    """Base class of the formula AST.  Use the concrete subclasses."""

    __slots__ = ("_hash", "_size", "_text")

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def _init(self, hash_key, size):
        object.__setattr__(self, "_hash", hash(hash_key))
        object.__setattr__(self, "_size", size)
        object.__setattr__(self, "_text", None)

    def __hash__(self):
        return self._hash

    @property
    def size(self) -> int:
        """Number of AST nodes."""
        return self._size

    def children(self) -> tuple[Sentence, ...]:
        return ()

    def __str__(self):
        if self._text is None:
            object.__setattr__(self, "_text", print_sentence(self))
        return self._text

    # Operator sugar for building sentences in code.
    def __and__(self, other: Sentence) -> Sentence:
        return Conj(self, other)

    def __or__(self, other: Sentence) -> Sentence:
        return Disj(self, other)

    def __invert__(self) -> Sentence:
        return Neg(self)


class Atom(Sentence):
    __slots__ = ("name",)

    def __init__(self, name: str):
        if not isinstance(name, str) or not _ATOM_RE.match(name):
            raise ValueError(f"invalid atom name {name!r}")
        object.__setattr__(self, "name", name)
        self._init(("atom", name), 1)

    def __eq__(self, other):
        return self is other or (type(other) is Atom and self._hash == other._hash and self.name == other.name)

    __hash__ = Sentence.__hash__

    def __repr__(self):
        return f"Atom({self.name!r})"

    def __reduce__(self):
        return (Atom, (self.name,))


class Bot(Sentence):
    __slots__ = ()

    def __init__(self):
        self._init(("bot",), 1)

    def __eq__(self, other):
        return type(other) is Bot

    __hash__ = Sentence.__hash__

    def __repr__(self):
        return "Bot()"

    def __reduce__(self):
        return (Bot, ())


class Neg(Sentence):
    __slots__ = ("child",)

    def __init__(self, child: Sentence):
        if not isinstance(child, Sentence):
            raise TypeError(f"Neg expects a Sentence, got {type(child).__name__}")
        object.__setattr__(self, "child", child)
        self._init(("neg", child._hash), child._size + 1)

    def children(self):
        return (self.child,)

    def __eq__(self, other):
        return self is other or (type(other) is Neg and self._hash == other._hash and self.child == other.child)

    __hash__ = Sentence.__hash__

    def __repr__(self):
        return f"Neg({self.child!r})"

    def __reduce__(self):
        return (Neg, (self.child,))


class _Binary(Sentence):
    __slots__ = ("left", "right")
    _tag = ""

    def __init__(self, left: Sentence, right: Sentence):
        if not isinstance(left, Sentence) or not isinstance(right, Sentence):
            raise TypeError(f"{type(self).__name__} expects two Sentences")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        self._init((self._tag, left._hash, right._hash), left._size + right._size + 1)

    def children(self):
        return (self.left, self.right)

    def __eq__(self, other):
        return self is other or (
            type(other) is type(self)
            and self._hash == other._hash
            and self.left == other.left
            and self.right == other.right
        )

    __hash__ = Sentence.__hash__

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"

    def __reduce__(self):
        return (type(self), (self.left, self.right))


class Conj(_Binary):
    __slots__ = ()
    _tag = "and"


class Disj(_Binary):
    __slots__ = ()
    _tag = "or"


BOT = Bot()


class Star:
    """The empty-information root label ``*``.  Never part of a sentence."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "STAR"

    def __str__(self):
        return "*"

    def __reduce__(self):
        return (Star, ())


STAR = Star()

Root = Union[Star, Sentence]


def sentence_key(s: Sentence) -> tuple[int, str]:
    """Canonical total order on sentences: size first, then printed form."""
    return (s.size, str(s))


# ---------------------------------------------------------------------------
# Parsing

class ParseError(ValueError):
    """Grammar error; ``offset`` is the byte offset into the input."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


_TOKEN_RE = re.compile(r"\s*(?:(->)|(_\|_)|([A-Za-z_][A-Za-z0-9_]*)|([!&|()*]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            # offset of the first non-space character
            off = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[off]!r}", len(text[:off].encode()))
        kind_val = next((i, g) for i, g in enumerate(m.groups()) if g is not None)
        start = m.start(m.lastindex)
        tokens.append((kind_val[1] if kind_val[0] != 2 else "ATOM", kind_val[1], len(text[:start].encode())))
        pos = m.end()
    tokens.append(("EOF", "", len(text.encode())))
    return tokens


class _Parser:
    def __init__(self, text: str, implication: bool):
        self.tokens = _tokenize(text)
        self.i = 0
        self.implication = implication

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "EOF" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def sentence(self):
        left = self.disj()
        if self.peek()[0] == "->":
            if not self.implication:
                raise ParseError("'->' requires implication desugaring to be enabled", self.peek()[2])
            self.take()
            right = self.sentence()  # right-associative
            return Disj(Neg(left), right)
        return left

    def disj(self):
        node = self.conj()
        while self.peek()[0] == "|":
            self.take()
            node = Disj(node, self.conj())
        return node

    def conj(self):
        node = self.unary()
        while self.peek()[0] == "&":
            self.take()
            node = Conj(node, self.unary())
        return node

    def unary(self):
        kind, val, off = self.peek()
        if kind == "!":
            self.take()
            return Neg(self.unary())
        if kind == "(":
            self.take()
            node = self.sentence()
            self.take(")")
            return node
        if kind == "ATOM":
            self.take()
            return Atom(val)
        if kind == "_|_":
            self.take()
            return BOT
        if kind == "*":
            raise ParseError("'*' is only allowed as a root label", off)
        what = "end of input" if kind == "EOF" else repr(val)
        raise ParseError(f"unexpected {what}", off)


def parse_sentence(text: str, *, implication: bool = False) -> Sentence:
    """Parse ``text`` into a :class:`Sentence`.

    Precedence is ``!`` > ``&`` > ``|``; binary operators associate to the left.
    With ``implication=True`` the input may also use ``A -> B`` (lowest
    precedence, right-associative), which is rewritten to ``!A | B``.
    """
    if not text or not text.strip():
        raise ParseError("empty input", 0)
    p = _Parser(text, implication)
    node = p.sentence()
    tok = p.peek()
    if tok[0] != "EOF":
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    return node


def parse_root(text: str, *, implication: bool = False) -> Root:
    if text.strip() == "*":
        return STAR
    return parse_sentence(text, implication=implication)


def _print(s: Sentence) -> str:
    if type(s) is Atom:
        return s.name
    if type(s) is Bot:
        return "_|_"
    if type(s) is Neg:
        inner = _print(s.child)
        if isinstance(s.child, _Binary):
            inner = f"({inner})"
        return "!" + inner
    if type(s) is Conj:
        left = _print(s.left)
        if type(s.left) is Disj:
            left = f"({left})"
        right = _print(s.right)
        if isinstance(s.right, _Binary):
            right = f"({right})"
        return f"{left} & {right}"
    if type(s) is Disj:
        right = _print(s.right)
        if type(s.right) is Disj:
            right = f"({right})"
        return f"{_print(s.left)} | {right}"
    raise TypeError(f"not a sentence: {s!r}")


def print_sentence(s: Sentence) -> str:
    """Render with minimal parentheses; inverse of :func:`parse_sentence`."""
    return _print(s)


def print_root(r: Root) -> str:
    return "*" if r is STAR else str(r)


# ---------------------------------------------------------------------------
# Structural helpers

def subsentences(sentences: Iterable[Sentence]) -> list[Sentence]:
    """The smallest set containing ``sentences`` closed under immediate subsentences.

    Returned as a list in canonical order (see :func:`sentence_key`).
    """
    seen: set[Sentence] = set()
    stack = [s for s in sentences if isinstance(s, Sentence)]
    while stack:
        s = stack.pop()
        if s in seen:
            continue
        seen.add(s)
        stack.extend(s.children())
    return sorted(seen, key=sentence_key)


def variables(sentences: Iterable[Sentence]) -> list[str]:
    """Sorted names of the propositional variables occurring in ``sentences``."""
    names = set()
    for s in subsentences(sentences):
        if type(s) is Atom:
            names.add(s.name)
    return sorted(names)


def conjoin(parts: Sequence[Sentence]) -> Sentence:
    """Left-associated conjunction of a nonempty sequence."""
    if not parts:
        raise ValueError("cannot conjoin an empty sequence")
    out = parts[0]
    for p in parts[1:]:
        out = Conj(out, p)
    return out


def disjoin(parts: Sequence[Sentence]) -> Sentence:
    if not parts:
        raise ValueError("cannot disjoin an empty sequence")
    out = parts[0]
    for p in parts[1:]:
        out = Disj(out, p)
    return out


def atoms_of_language(vars: Sequence[str]) -> list[Sentence]:
    """All maximal consistent conjunctions of literals over ``vars``.

    Order follows binary counting with the positive literal first, e.g.
    ``[p & q, p & !q, !p & q, !p & !q]``.
    """
    if not vars:
        raise ValueError("empty variable list")
    if len(set(vars)) != len(vars):
        raise ValueError("variables must be distinct")
    atoms = [Atom(v) for v in vars]
    out = []
    for signs in itertools.product((True, False), repeat=len(vars)):
        out.append(conjoin([a if pos else Neg(a) for a, pos in zip(atoms, signs)]))
    return out


# ---------------------------------------------------------------------------
# Classical semantics (desk-scale oracle)

class OracleBoundError(RuntimeError):
    """Raised when a truth-table computation exceeds the variable cap."""


def brute_force_bound() -> int:
    return int(os.environ.get("DBBEL_BRUTE_FORCE_VARS", "20"))


def eval_classical(s: Sentence, valuation: Mapping[str, bool]) -> bool:
    t = type(s)
    if t is Atom:
        try:
            return bool(valuation[s.name])
        except KeyError:
            raise KeyError(f"valuation does not assign atom {s.name!r}") from None
    if t is Bot:
        return False
    if t is Neg:
        return not eval_classical(s.child, valuation)
    if t is Conj:
        return eval_classical(s.left, valuation) and eval_classical(s.right, valuation)
    if t is Disj:
        return eval_classical(s.left, valuation) or eval_classical(s.right, valuation)
    raise TypeError(f"not a sentence: {s!r}")


def truth_table(s: Sentence, vars: Sequence[str]) -> np.ndarray:
    """Boolean vector of ``s`` over all ``2**len(vars)`` valuations.

    Row ``i`` assigns variable ``j`` the value of bit ``n-1-j`` of ``i`` negated,
    so row 0 is all-true, matching the order of :func:`atoms_of_language`.
    """
    n = len(vars)
    idx = np.arange(2 ** n, dtype=np.int64)
    columns = {v: ((idx >> (n - 1 - j)) & 1) == 0 for j, v in enumerate(vars)}
    memo: dict[Sentence, np.ndarray] = {}

    def ev(x):
        r = memo.get(x)
        if r is not None:
            return r
        t = type(x)
        if t is Atom:
            try:
                r = columns[x.name]
            except KeyError:
                raise KeyError(f"variable {x.name!r} not in {list(vars)}") from None
        elif t is Bot:
            r = np.zeros(2 ** n, dtype=bool)
        elif t is Neg:
            r = ~ev(x.child)
        elif t is Conj:
            r = ev(x.left) & ev(x.right)
        else:
            r = ev(x.left) | ev(x.right)
        memo[x] = r
        return r

    return ev(s)


def _check_bound(vars, bound):
    limit = brute_force_bound() if bound is None else bound
    if len(vars) > limit:
        raise OracleBoundError(f"{len(vars)} variables exceed the brute-force bound {limit}")


def classical_entails(premises: Iterable[Sentence], goal: Sentence, *, bound: int | None = None) -> bool:
    """Truth-table check of ``premises |= goal``."""
    premises = [p for p in premises if isinstance(p, Sentence)]
    vars = variables(premises + [goal])
    _check_bound(vars, bound)
    ok = np.ones(2 ** len(vars), dtype=bool)
    for p in premises:
        ok &= truth_table(p, vars)
    return bool(np.all(truth_table(goal, vars)[ok]))


def is_classically_consistent(s: Sentence, *, bound: int | None = None) -> bool:
    return not classical_entails([s], BOT, bound=bound)
