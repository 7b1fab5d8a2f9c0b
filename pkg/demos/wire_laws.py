"""Wires are one-state processes that tie interface actions together.

Run with ``python demos/wire_laws.py``.  Shows the label set of a few
wires, then checks that differently drawn wire networks behave the same.
"""

from tcpalgebra import Alphabet, Sort, WireRelation, builtin_wire, check_wire_laws, sem, wire_label_set
from tcpalgebra.cli import format_label

abc = Alphabet(("tau", "l", "u"))

# The diagonal copies the action on its left port to both right ports.
diagonal = WireRelation(Sort(1, 2), {(1, 2), (1, 3)})
print("diagonal labels:", " ".join(format_label(lab) for lab in wire_label_set(diagonal, abc)))

# Without constraints every combination is allowed: 3 actions on 2 ports.
free = WireRelation(Sort(1, 1), set())
print(f"unconstrained 1->1 wire: {len(wire_label_set(free, abc))} labels")

t = sem(builtin_wire("dup", abc))
print(f"\nSem(dup): {len(t.states)} state, {len(t.transitions)} loops")

print("\nlaws:")
for report in check_wire_laws(abc):
    print(" ", report.to_text())
