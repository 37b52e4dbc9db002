"""Beliefs about an urn with ambiguous composition.

A third of the balls are red; the rest are yellow or green in unknown
proportion.  At stage 0 the agent cannot commit any mass to yellow alone.
Splitting the yellow-or-green leaf on Y (an even split, one policy among many)
yields stage 1.
"""

from dbbel.belief import belief_and_plausibility
from dbbel.fixtures import ellsberg_queries, ellsberg_stages, ellsberg_variant_stages

for name, stages in (("ellsberg", ellsberg_stages()), ("ellsberg-variant", ellsberg_variant_stages())):
    print(f"== {name}")
    queries = ellsberg_queries(name)[:-1]  # skip the long background sentence
    print(f"{'query':<8}" + "".join(f"  B{s.k:<6} Pl{s.k:<5}" for s in stages))
    for q in queries:
        cells = []
        for s in stages:
            a = belief_and_plausibility(s, q)
            cells.append(f"  {str(a.belief):<7} {str(a.plausibility):<7}")
        print(f"{str(q):<8}" + "".join(cells))
    print()
