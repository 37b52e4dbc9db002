"""Depth-bounded inference: what a reasoner without case splits can conclude.

Three blocks stand in a row.  Jack looks at Anne, Anne looks at George, Jack
is married and George is not.  Is some married block looking at an unmarried
one?  Answering needs a case split on whether Anne is married.
"""

from dbbel.fixtures import levesque_goal, levesque_premises
from dbbel.proof import derive0_trace, derives0, derives_k, witness_tree
from dbbel.syntax import parse_sentence

prem, goal = levesque_premises(), levesque_goal()
print("premise:", prem[0])
print("goal:   ", goal)
for k in range(3):
    print(f"  derivable with at most {k} nested case split(s): {derives_k(prem, goal, k)}")

tree = witness_tree(prem[0], goal, 1)
print("\nleaves of the depth-1 witness tree (each reaches the goal by intro/elim rules alone):")
for node in tree.leaves():
    print("  ", node.info)

print("\na depth-0 derivation, step by step:")
trace = derive0_trace([parse_sentence("p & (!p | q)")], parse_sentence("q | r"))
for i, step in enumerate(trace.steps):
    refs = ", ".join(str(j) for j in step.premises)
    print(f"  {i}. {step.sentence}   [{step.rule}{' ' + refs if refs else ''}]")

excluded_middle = parse_sentence("p | !p")
print("\np | !p from no premises: depth 0 ->", derives0([], excluded_middle),
      "| depth 1 ->", derives_k([], excluded_middle, 1))
