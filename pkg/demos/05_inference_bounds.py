"""Tightest bounds on a query given belief constraints, as the depth grows.

The only support sentence is p | q, and we require B(!p) >= 1/2.  At depth 0
no leaf derives !p, so the constraint cannot hold.  Splitting on p creates a
leaf that derives both !p and q, which forces at least half the mass onto q.
"""

from fractions import Fraction

from dbbel.solver import Problem, RawConstraint, b_k_inf
from dbbel.syntax import parse_sentence

p_or_q, not_p, q = (parse_sentence(t) for t in ("p | q", "!p", "q"))
rows = [RawConstraint(((Fraction(1), not_p),), ">=", Fraction(1, 2))]
for k in range(3):
    prob = Problem.from_raw(rows, depth=k, supp=[p_or_q], query=q, mode="binf")
    res = b_k_inf(prob)
    bounds = f"B_k(q) >= {res.lower}  Pl_k(q) <= {res.upper}" if res.sat else "constraints infeasible"
    print(f"k={k}: {res.status:<5} {bounds}  ({res.forests_enumerated} forests enumerated, budget {res.budget})")
