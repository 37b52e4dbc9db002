"""Constraints on beliefs can be unsatisfiable at one depth and satisfiable at the next.

Support {p, q}: require B(p) >= 1/2 and B(q) >= 2/3.  At depth 0 the two
roots must share one unit of mass, which is too little.  One split on p lets
the q-root's mass count towards p as well.
"""

from dbbel.belief import belief
from dbbel.fixtures import hierarchy_problem
from dbbel.forest import leaf_id_str, leaves
from dbbel.solver import gensat0, gensat_k
from dbbel.syntax import Atom

r0 = gensat0(hierarchy_problem(0))
print("depth 0:", r0.status)
r1 = gensat_k(hierarchy_problem(1))
print("depth 1:", r1.status, f"(forest {r1.forests_checked} of {r1.forests_admissible} admissible)")
w = r1.witness
for lid, info in leaves(w.forest):
    print(f"  leaf {leaf_id_str(lid)}: {info}  mass {w.mass[lid]}")
print("  B1(p) =", belief(w, Atom("p")), " B1(q) =", belief(w, Atom("q")))
