"""Depth-bounded belief functions over propositional logic.

Submodules: :mod:`~dbbel.syntax` (sentences), :mod:`~dbbel.proof` (k-depth
derivability), :mod:`~dbbel.forest` (depth-bounded forests),
:mod:`~dbbel.belief` (masses, B_k and Pl_k), :mod:`~dbbel.ratlp` (exact LP)
and :mod:`~dbbel.solver` (satisfiability and inference bounds).
"""

from .belief import (
    BeliefAssessment, DbmStage, MassError, MassFunction, atom_forest_embedding,
    atom_forest_sequence, belief, belief_and_plausibility, initial_stage, plausibility, refine,
)
from .forest import Forest, ForestError, Tree, enumerate_uniform_analytic, expand, new_forest
from .proof import Decision, decides0, derive0_trace, derives0, derives_k, is_inconsistent0, witness_tree
from .ratlp import LinearProgram, solve
from .solver import (
    BudgetError, NormalizedConstraint, Problem, ProblemError, RawConstraint, SolveResult,
    b_k_inf, gensat0, gensat_k, normalize,
)
from .syntax import (
    BOT, STAR, Atom, Conj, Disj, Neg, ParseError, Sentence, parse_sentence, print_sentence,
)

__all__ = [
    "BeliefAssessment", "DbmStage", "MassError", "MassFunction", "atom_forest_embedding",
    "atom_forest_sequence", "belief", "belief_and_plausibility", "initial_stage", "plausibility", "refine",
    "Forest", "ForestError", "Tree", "enumerate_uniform_analytic", "expand", "new_forest",
    "Decision", "decides0", "derive0_trace", "derives0", "derives_k", "is_inconsistent0", "witness_tree",
    "LinearProgram", "solve",
    "BudgetError", "NormalizedConstraint", "Problem", "ProblemError", "RawConstraint", "SolveResult",
    "b_k_inf", "gensat0", "gensat_k", "normalize",
    "BOT", "STAR", "Atom", "Conj", "Disj", "Neg", "ParseError", "Sentence", "parse_sentence", "print_sentence",
]

__version__ = "0.1.0"
