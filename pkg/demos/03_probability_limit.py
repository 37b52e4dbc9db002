"""Once every leaf is an atom of the language, belief is probability.

Builds the forest that branches on p, q and r in turn, puts a random
distribution on its eight leaves and compares B_k with the probability
computed from the truth table.  Before the last stage, B_k can sit strictly
below the probability.
"""

import random
from fractions import Fraction

from dbbel.belief import atom_forest_sequence, belief, plausibility
from dbbel.syntax import atoms_of_language, parse_sentence, truth_table

VARS = ["p", "q", "r"]
rng = random.Random(7)
atoms = atoms_of_language(VARS)
weights = [rng.randint(1, 6) for _ in atoms]
dist = {a: Fraction(w, sum(weights)) for a, w in zip(atoms, weights)}
stages = atom_forest_sequence(dist, VARS)


def probability(s):
    # truth_table rows follow the same sign order as atoms_of_language
    return sum((m for m, row in zip(dist.values(), truth_table(s, VARS)) if row), Fraction(0))


for text in ["p | q", "(p & !q) | (q & r)", "!(p & q & r)", "(p | !q) & (q | !r)"]:
    s = parse_sentence(text)
    row = "  ".join(f"k={st.k}: [{belief(st, s)}, {plausibility(st, s)}]" for st in stages)
    print(f"{text:<22} P={str(probability(s)):<6} {row}")
