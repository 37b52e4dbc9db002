"""Satisfiability and inference bounds for linear constraints on depth-bounded beliefs.

Constraints are linear in ``B_k(φ)`` / ``Pl_k(φ)`` values.  A problem is solved
by enumerating uniform analytic forests, keeping the Pareto-maximal ones free
of deep contradictions, and solving one exact LP per forest in the unknown
leaf masses.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .belief import (
    DbmStage, MassFunction, b_set, belief, format_fraction, parse_fraction, pl_set, plausibility,
)
from .forest import (
    Forest, enumerate_uniform_analytic, free_of_deep_contradictions, leaves, new_forest,
    select_pareto_maximal,
)
from .proof import is_inconsistent0
from .ratlp import LinearProgram, solve
from .syntax import STAR, Sentence, parse_sentence, subsentences

__all__ = [
    "RawConstraint", "NormalizedConstraint", "Constraint", "Problem", "SolveResult",
    "BudgetError", "ProblemError", "normalize", "gensat0", "gensat_k", "b_k_inf",
    "solve_problem", "budget", "evaluate_constraint", "DEFAULT_MAX_DEPTH", "DEFAULT_MAX_FORESTS",
]

DEFAULT_MAX_DEPTH = 3
DEFAULT_MAX_FORESTS = 200_000
RELATIONS = ("<=", "=", ">=")


class ProblemError(ValueError):
    pass


class BudgetError(RuntimeError):
    def __init__(self, message: str, required: int):
        super().__init__(message)
        self.required = required


@dataclass(frozen=True)
class RawConstraint:
    """``Σ d_j · B(φ_j)  rel  z``."""

    terms: tuple[tuple[Fraction, Sentence], ...]
    rel: str
    bound: Fraction

    def __post_init__(self):
        if not self.terms:
            raise ProblemError("constraint has no terms")
        if self.rel not in RELATIONS:
            raise ProblemError(f"unknown relation {self.rel!r}")


@dataclass(frozen=True)
class NormalizedConstraint:
    """``Σ a_j · B(φ_j) + w  <=  Σ b_j · Pl(ψ_j) + v`` with natural coefficients."""

    bel_terms: tuple[tuple[int, Sentence], ...]
    w: int
    pl_terms: tuple[tuple[int, Sentence], ...]
    v: int

    def __post_init__(self):
        nats = [a for a, _ in self.bel_terms] + [b for b, _ in self.pl_terms] + [self.w, self.v]
        if any(not isinstance(x, int) or x < 0 for x in nats):
            raise ProblemError("normalized coefficients must be natural numbers")


@dataclass(frozen=True)
class Constraint:
    """General row ``Σ c · F(φ)  rel  bound`` with ``F`` either "B" or "Pl"."""

    terms: tuple[tuple[Fraction, str, Sentence], ...]
    rel: str
    bound: Fraction

    @classmethod
    def from_raw(cls, raw: RawConstraint) -> Constraint:
        return cls(tuple((Fraction(d), "B", s) for d, s in raw.terms), raw.rel, Fraction(raw.bound))

    @classmethod
    def from_normalized(cls, nc: NormalizedConstraint) -> Constraint:
        terms = tuple((Fraction(a), "B", s) for a, s in nc.bel_terms)
        terms += tuple((Fraction(-b), "Pl", s) for b, s in nc.pl_terms)
        return cls(terms, "<=", Fraction(nc.v - nc.w))

    def sentences(self) -> list[Sentence]:
        return [s for _, _, s in self.terms]


def normalize(raw: Iterable[RawConstraint]) -> list[NormalizedConstraint]:
    """Rewrite ``Σ d·B(φ) rel z`` rows into natural-coefficient Bel/Pl form.

    ``=`` becomes two ``<=`` rows and ``>=`` is flipped; negative terms move to
    the right-hand side (where they read as plausibilities) and each row is
    scaled by the LCM of its denominators.
    """
    out = []
    for rc in raw:
        if not rc.terms:
            raise ProblemError("constraint has no terms")
        rows = []
        if rc.rel in ("<=", "="):
            rows.append((list(rc.terms), Fraction(rc.bound)))
        if rc.rel in (">=", "="):
            rows.append(([(-Fraction(d), s) for d, s in rc.terms], -Fraction(rc.bound)))
        for terms, z in rows:
            merged: dict[Sentence, Fraction] = {}
            for d, s in terms:
                merged[s] = merged.get(s, Fraction(0)) + Fraction(d)
            left = [(d, s) for s, d in merged.items() if d > 0]
            right = [(-d, s) for s, d in merged.items() if d < 0]
            w = -z if z < 0 else Fraction(0)
            v = z if z > 0 else Fraction(0)
            dens = [x.denominator for x, _ in left + right] + [w.denominator, v.denominator]
            scale = math.lcm(*dens)
            out.append(NormalizedConstraint(
                tuple((int(d * scale), s) for d, s in left), int(w * scale),
                tuple((int(d * scale), s) for d, s in right), int(v * scale),
            ))
    return out


@dataclass(frozen=True)
class Problem:
    constraints: tuple[Constraint, ...]
    depth: int = 0
    query: Optional[Sentence] = None
    supp: tuple[Sentence, ...] = ()
    mode: str = "gensat"  # "gensat" or "binf"
    pl_rewrite: bool = False

    def __post_init__(self):
        supp = self.supp
        if not supp:
            seen: list[Sentence] = []
            for c in self.constraints:
                for s in c.sentences():
                    if s not in seen:
                        seen.append(s)
            supp = tuple(seen)
        else:
            supp = tuple(dict.fromkeys(supp))
        if not supp:
            raise ProblemError("support is empty; give constraints or an explicit support")
        if any(s is STAR for s in supp):
            raise ProblemError("'*' cannot be a support sentence here")
        if self.depth < 0:
            raise ProblemError("depth must be non-negative")
        if self.mode not in ("gensat", "binf"):
            raise ProblemError(f"unknown mode {self.mode!r}")
        if self.mode == "binf" and self.query is None:
            raise ProblemError("binf needs a query")
        object.__setattr__(self, "supp", supp)

    @classmethod
    def from_raw(cls, raw: Sequence[RawConstraint], depth: int = 0, query: Optional[Sentence] = None,
                 supp: Sequence[Sentence] = (), mode: str = "gensat", pl_rewrite: bool = False) -> Problem:
        """Build from ``Σ d·B(φ) rel z`` rows.

        By default every term keeps its belief reading.  ``pl_rewrite=True``
        instead applies :func:`normalize`, so right-hand terms become
        plausibilities.
        """
        if pl_rewrite:
            rows = tuple(Constraint.from_normalized(nc) for nc in normalize(raw))
        else:
            rows = tuple(Constraint.from_raw(r) for r in raw)
        if not supp:
            supp = tuple(dict.fromkeys(s for r in raw for _, s in r.terms))
        return cls(rows, depth, query, tuple(supp), mode, pl_rewrite)

    @classmethod
    def from_normalized(cls, constraints: Sequence[NormalizedConstraint], depth: int = 0,
                        query: Optional[Sentence] = None, supp: Sequence[Sentence] = (),
                        mode: str = "gensat") -> Problem:
        if not supp:
            supp = tuple(dict.fromkeys(
                s for nc in constraints for _, s in list(nc.bel_terms) + list(nc.pl_terms)))
        return cls(tuple(Constraint.from_normalized(nc) for nc in constraints), depth, query, tuple(supp), mode)

    @classmethod
    def from_json(cls, data: Mapping, *, implication: bool = False) -> Problem:
        def sent(t):
            return parse_sentence(t, implication=implication)

        if not isinstance(data, Mapping):
            raise ProblemError("problem JSON must be an object")
        has_raw, has_norm = "raw_constraints" in data, "constraints" in data
        if has_raw == has_norm:
            raise ProblemError("exactly one of 'raw_constraints' and 'constraints' is required")
        depth = int(data.get("depth", 0))
        mode = data.get("mode", "gensat")
        query = sent(data["query"]) if data.get("query") is not None else None
        supp = tuple(sent(s) for s in data.get("supp", ()))
        try:
            if has_raw:
                raw = [RawConstraint(tuple((parse_fraction(d), sent(s)) for d, s in rc["terms"]),
                                     rc["rel"], parse_fraction(rc["bound"]))
                       for rc in data["raw_constraints"]]
                return cls.from_raw(raw, depth, query, supp, mode, bool(data.get("pl_rewrite", False)))
            norm = [NormalizedConstraint(
                tuple((_nat(a), sent(s)) for a, s in nc.get("bel", ())), _nat(nc.get("w", "0")),
                tuple((_nat(b), sent(s)) for b, s in nc.get("pl", ())), _nat(nc.get("v", "0")))
                for nc in data["constraints"]]
        except (KeyError, TypeError) as exc:
            raise ProblemError(f"malformed constraint: {exc}") from None
        return cls.from_normalized(norm, depth, query, supp, mode)


def _nat(text) -> int:
    x = parse_fraction(text)
    if x.denominator != 1 or x < 0:
        raise ProblemError(f"{text!r} is not a natural number")
    return int(x)


@dataclass
class SolveResult:
    status: str  # "SAT" or "UNSAT"
    depth: int
    witness: Optional[DbmStage] = None
    forests_enumerated: int = 0
    forests_admissible: int = 0
    forests_checked: int = 0
    budget: int = 1
    lower: Optional[Fraction] = None
    upper: Optional[Fraction] = None
    lower_witness: Optional[DbmStage] = None
    upper_witness: Optional[DbmStage] = None
    query: Optional[Sentence] = None

    @property
    def sat(self) -> bool:
        return self.status == "SAT"

    def to_json(self) -> dict:
        out: dict = {
            "status": self.status,
            "depth": self.depth,
            "budget": self.budget,
            "forests_enumerated": self.forests_enumerated,
            "forests_admissible": self.forests_admissible,
            "forests_checked": self.forests_checked,
        }
        if self.witness is not None:
            out["witness"] = _stage_json(self.witness)
        if self.query is not None:
            out["query"] = str(self.query)
        if self.lower is not None:
            out["lower"] = format_fraction(self.lower)
            out["upper"] = format_fraction(self.upper)
            out["lower_witness"] = _stage_json(self.lower_witness)
            out["upper_witness"] = _stage_json(self.upper_witness)
        return out


def _stage_json(stage: DbmStage) -> dict:
    return {"forest": stage.forest.to_json(), **stage.mass.to_json()}


def evaluate_constraint(stage: DbmStage, c: Constraint) -> bool:
    """Exact check of one constraint against the belief values of ``stage``."""
    lhs = Fraction(0)
    for coeff, kind, s in c.terms:
        lhs += coeff * (belief(stage, s) if kind == "B" else plausibility(stage, s))
    if c.rel == "<=":
        return lhs <= c.bound
    if c.rel == ">=":
        return lhs >= c.bound
    return lhs == c.bound


def budget(problem: Problem, k: Optional[int] = None) -> int:
    """Upper bound ``|S(Supp)| ** (2**k - 1)`` on the number of uniform analytic forests."""
    k = problem.depth if k is None else k
    return len(subsentences(problem.supp)) ** (2 ** k - 1)


def _build_lp(forest: Forest, constraints: Sequence[Constraint],
              objective: Optional[tuple[str, str, Sentence]] = None) -> tuple[LinearProgram, list]:
    ids = [lid for lid, _ in leaves(forest)]
    col = {lid: j for j, lid in enumerate(ids)}
    n = len(ids)
    sets: dict[tuple[str, Sentence], list] = {}

    def leafset(kind, s):
        key = (kind, s)
        if key not in sets:
            sets[key] = b_set(forest, s) if kind == "B" else pl_set(forest, s)
        return sets[key]

    lp = LinearProgram(n)
    for c in constraints:
        coeffs = [Fraction(0)] * n
        for coeff, kind, s in c.terms:
            for lid in leafset(kind, s):
                coeffs[col[lid]] += coeff
        lp.add(coeffs, c.rel, c.bound)
    lp.add([1] * n, "=", 1)
    for lid, info in leaves(forest):
        if info is not STAR and is_inconsistent0(info):
            row = [0] * n
            row[col[lid]] = 1
            lp.add(row, "=", 0)
    if objective is not None:
        sense, kind, s = objective
        obj = [Fraction(0)] * n
        for lid in leafset(kind, s):
            obj[col[lid]] = Fraction(1)
        lp.objective = obj
        lp.sense = sense
    return lp, ids


def _stage_from(forest: Forest, ids: list, x: Sequence[Fraction], check_deep: bool) -> DbmStage:
    mass = MassFunction(forest, dict(zip(ids, x)))
    return DbmStage(forest, mass, check_deep=check_deep)


def _verify(stage: DbmStage, constraints: Sequence[Constraint]) -> None:
    for i, c in enumerate(constraints):
        if not evaluate_constraint(stage, c):
            raise AssertionError(f"witness violates constraint {i}")


def _admissible(problem: Problem, k: int, max_forests: int, max_depth: int) -> tuple[list[Forest], int]:
    if k > max_depth:
        raise BudgetError(f"depth {k} exceeds the cap {max_depth}", budget(problem, k))
    if k == 0:
        return [new_forest(problem.supp)], 1
    need = budget(problem, k)
    if need > max_forests:
        raise BudgetError(f"{need} forests needed at depth {k}, cap is {max_forests}", need)
    agenda = subsentences(problem.supp)
    candidates = enumerate_uniform_analytic(problem.supp, k, agenda=agenda)
    assert len(candidates) <= need
    maximal = select_pareto_maximal(candidates, agenda)
    return [f for f in maximal if free_of_deep_contradictions(f)], len(candidates)


def _feasibility_task(args):
    forest, constraints = args
    lp, ids = _build_lp(forest, constraints)
    out = solve(lp)
    return out.witness if out.ok else None


def _bounds_task(args):
    forest, constraints, query = args
    lo_lp, ids = _build_lp(forest, constraints, ("minimize", "B", query))
    lo = solve(lo_lp)
    if not lo.ok:
        return None
    hi_lp, _ = _build_lp(forest, constraints, ("maximize", "Pl", query))
    hi = solve(hi_lp)
    return (lo.optimum, lo.witness, hi.optimum, hi.witness)


def _map(fn, tasks, jobs: int):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, tasks))
    return None  # caller evaluates lazily


def gensat_k(problem: Problem, k: Optional[int] = None, *, jobs: int = 1,
             max_forests: int = DEFAULT_MAX_FORESTS, max_depth: int = DEFAULT_MAX_DEPTH) -> SolveResult:
    """Is there an admissible stage-``k`` forest and mass satisfying every constraint?

    Returns the first feasible forest in canonical enumeration order.
    """
    k = problem.depth if k is None else k
    forests, enumerated = _admissible(problem, k, max_forests, max_depth)
    result = SolveResult("UNSAT", k, forests_enumerated=enumerated, forests_admissible=len(forests),
                         budget=1 if k == 0 else budget(problem, k))
    tasks = [(f, problem.constraints) for f in forests]
    precomputed = _map(_feasibility_task, tasks, jobs)
    for i, task in enumerate(tasks):
        x = precomputed[i] if precomputed is not None else _feasibility_task(task)
        if x is not None:
            forest = task[0]
            ids = [lid for lid, _ in leaves(forest)]
            stage = _stage_from(forest, ids, x, check_deep=k > 0)
            _verify(stage, problem.constraints)
            result.status = "SAT"
            result.witness = stage
            result.forests_checked = i + 1
            return result
    result.forests_checked = len(tasks)
    return result


def gensat0(problem: Problem, *, jobs: int = 1) -> SolveResult:
    """Depth-0 satisfiability: masses live directly on the support sentences."""
    if problem.depth != 0:
        raise ProblemError("gensat0 needs a depth-0 problem")
    if all(is_inconsistent0(s) for s in problem.supp):
        raise ProblemError("every support sentence is 0-inconsistent")
    return gensat_k(problem, 0, jobs=jobs)


def b_k_inf(problem: Problem, k: Optional[int] = None, *, jobs: int = 1,
            max_forests: int = DEFAULT_MAX_FORESTS, max_depth: int = DEFAULT_MAX_DEPTH) -> SolveResult:
    """Tightest ``[lower, upper]`` with ``lower <= B_k(query)`` and ``Pl_k(query) <= upper``.

    Bounds are taken over every admissible forest whose constraint system is
    feasible; UNSAT when there is none.
    """
    if problem.query is None:
        raise ProblemError("b_k_inf needs a query")
    k = problem.depth if k is None else k
    if k == 0 and all(is_inconsistent0(s) for s in problem.supp):
        raise ProblemError("every support sentence is 0-inconsistent")
    forests, enumerated = _admissible(problem, k, max_forests, max_depth)
    result = SolveResult("UNSAT", k, forests_enumerated=enumerated, forests_admissible=len(forests),
                         budget=1 if k == 0 else budget(problem, k), query=problem.query)
    tasks = [(f, problem.constraints, problem.query) for f in forests]
    precomputed = _map(_bounds_task, tasks, jobs)
    best_lo = best_hi = None
    for i, task in enumerate(tasks):
        out = precomputed[i] if precomputed is not None else _bounds_task(task)
        if out is None:
            continue
        forest = task[0]
        ids = [lid for lid, _ in leaves(forest)]
        lo, xlo, hi, xhi = out
        if best_lo is None or lo < best_lo[0]:
            best_lo = (lo, _stage_from(forest, ids, xlo, check_deep=k > 0))
        if best_hi is None or hi > best_hi[0]:
            best_hi = (hi, _stage_from(forest, ids, xhi, check_deep=k > 0))
    result.forests_checked = len(tasks)
    if best_lo is None:
        return result
    for value, stage in (best_lo, best_hi):
        _verify(stage, problem.constraints)
    assert belief(best_lo[1], problem.query) == best_lo[0]
    assert plausibility(best_hi[1], problem.query) == best_hi[0]
    result.status = "SAT"
    result.lower, result.lower_witness = best_lo
    result.upper, result.upper_witness = best_hi
    result.witness = best_lo[1]
    return result


def solve_problem(problem: Problem, *, jobs: int = 1, max_forests: int = DEFAULT_MAX_FORESTS,
                  max_depth: int = DEFAULT_MAX_DEPTH) -> SolveResult:
    """Dispatch on ``problem.mode``."""
    if problem.mode == "binf":
        return b_k_inf(problem, jobs=jobs, max_forests=max_forests, max_depth=max_depth)
    if problem.depth == 0:
        return gensat0(problem, jobs=jobs)
    return gensat_k(problem, jobs=jobs, max_forests=max_forests, max_depth=max_depth)
