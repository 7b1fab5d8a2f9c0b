"""From a transition graph back to a process expression.

Run with ``python demos/synthesis.py``.  Draws a small random LTS, turns
it into a recursive expression with one equation per state, and checks
that the expression's semantics is the same graph again.
"""

import random

from tcpalgebra import check_prop1, isomorphic, print_expr, reach, sem, synth_expr
from tcpalgebra.cli import format_label
from tcpalgebra.verify import random_lts

rng = random.Random(4)
t = random_lts(rng, max_states=4, max_actions=2, max_sort=(1, 1))
print(f"a random LTS of sort {t.sort.left}->{t.sort.right}, initial state {t.initial}:")
for tr in t.ordered_transitions():
    print(f"  {tr.source} {format_label(tr.label)} {tr.target}")

e = synth_expr(t, t.initial)
print("\nas an expression:")
print(" ", print_expr(e))

got = sem(e)
theta = isomorphic(got, reach(t, t.initial))
print("\nstate correspondence:", theta)

# The same round trip from every state, as a law report.
for s in t.states:
    print(" ", check_prop1(t, s).to_text(), f"(from state {s})")
