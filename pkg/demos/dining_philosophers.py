"""Two dining philosophers sharing two forks.

Run with ``python demos/dining_philosophers.py``.  Builds the ring from
the bundled model, lists the moves out of the starting state, explores
the whole state space and looks for a state nobody can leave.
"""

from tcpalgebra import deadlocks, find_path, load_model, sem, step
from tcpalgebra.cli import format_label
from tcpalgebra.kernel import render

model = load_model("dinphil.tcp")
ring = model["DinPhil"]

# A philosopher alone: four states, each with an idle loop and one move forward.
ph = sem(model["Ph"])
print(f"one philosopher: {len(ph.states)} states, {len(ph.transitions)} transitions")
for tr in ph.ordered_transitions():
    print(f"  {tr.source} {format_label(tr.label)} {tr.target}")

t = sem(ring)
print(f"\nthe ring: {len(t.states)} reachable states, {len(t.transitions)} transitions")

# The closed ring has no free interfaces, so every move carries the empty label.
# Sem numbers states in discovery order; the payload holds each state's text.
ids = {text: k for k, text in t.payload.items()}
print("moves out of the starting ring:")
for st in step(ring):
    print(f"  {format_label(st.label)} -> state {ids[render(st.target)]}")

# Every state idles on a silent loop, so a deadlock is a state that cannot
# reach any *other* state.
(stuck,) = deadlocks(t)
print(f"deadlocked state: {stuck}")
print("  both philosophers hold their left fork and wait forever for the right one")

for x in t.states[1:]:
    path = find_path(t, x, t.initial)
    how = "stuck" if path is None else " -> ".join([str(x)] + [str(tr.target) for tr in path])
    print(f"  back to the start from {x}: {how}")
