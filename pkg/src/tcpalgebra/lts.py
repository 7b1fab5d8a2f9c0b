"""Finite labelled transition systems and the span operations on them."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Optional

from .errors import SchemaError, SortMismatch, StateBoundExceeded, UnknownState
from .kernel import TAU, Alphabet, Expr, Label, Sort, alpha_canonical, render, sort_of
from .sos import DEFAULT_MAX_DEPTH, Deriver, recursion_headroom

DEFAULT_MAX_STATES = 100_000


class Transition(NamedTuple):
    source: object
    label: Label
    target: object


@dataclass(frozen=True)
class Lts:
    """A light LTS of a fixed sort: transitions form a set of triples.

    ``payload`` optionally maps state ids to the printed expression the
    state stands for; it is metadata and does not take part in equality.
    """

    sort: Sort
    states: tuple
    initial: object
    transitions: frozenset
    alphabet: tuple = ()
    payload: Optional[Mapping] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "sort", Sort(*self.sort))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(
            self, "transitions", frozenset(Transition(s, Label(*lab), t) for s, lab, t in self.transitions)
        )
        object.__setattr__(self, "alphabet", tuple(self.alphabet) or _alphabet_of(self.transitions))
        members = set(self.states)
        if len(members) != len(self.states):
            raise SchemaError("duplicate state ids")
        if self.initial not in members:
            raise UnknownState(f"initial state {self.initial!r} is not a state")
        for tr in self.transitions:
            if tr.source not in members or tr.target not in members:
                raise UnknownState(f"transition {tr} leaves the state set")
            if tr.label.sort != self.sort:
                raise SchemaError(f"label {tr.label} does not have sort {self.sort}")

    def _index(self):
        d = self.__dict__
        idx = d.get("_idx")
        if idx is None:
            idx = {s: i for i, s in enumerate(self.states)}
            d["_idx"] = idx
        return idx

    def _adjacency(self):
        d = self.__dict__
        adj = d.get("_adj")
        if adj is None:
            adj = {s: [] for s in self.states}
            for tr in self.ordered_transitions():
                adj[tr.source].append(tr)
            d["_adj"] = adj
        return adj

    def outgoing(self, state) -> list:
        try:
            return self._adjacency()[state]
        except KeyError:
            raise UnknownState(f"unknown state {state!r}") from None

    def ordered_transitions(self) -> list:
        """Transitions sorted by source position, label, target position."""
        idx = self._index()
        return sorted(self.transitions, key=lambda t: (idx[t.source], t.label, idx[t.target]))


def _alphabet_of(transitions, given=None):
    if given is not None:
        return tuple(given)
    seen = set()
    for tr in transitions:
        seen.update(tr.label.left)
        seen.update(tr.label.right)
    seen.discard(TAU)
    return (TAU,) + tuple(sorted(seen))


def sem(
    e: Expr,
    max_states: int = DEFAULT_MAX_STATES,
    alphabet: Optional[Alphabet] = None,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> Lts:
    """The LTS reachable from ``e`` under the reaction rules.

    States are dense integers in breadth-first discovery order (steps are
    taken in canonical order); ``payload`` maps each id to the printed
    canonical expression.
    """
    sort = sort_of(e)
    root = alpha_canonical(e)
    deriver = Deriver(max_depth)
    ids = {root: 0}
    exprs = [root]
    transitions = set()
    queue = deque([root])
    while queue:
        cur = queue.popleft()
        src = ids[cur]
        for st in deriver.steps(cur):
            dst = ids.get(st.target)
            if dst is None:
                if len(exprs) >= max_states:
                    partial = _finish(sort, exprs, transitions, alphabet)
                    raise StateBoundExceeded(max_states, partial)
                dst = ids[st.target] = len(exprs)
                exprs.append(st.target)
                queue.append(st.target)
            transitions.add(Transition(src, st.label, dst))
    return _finish(sort, exprs, transitions, alphabet)


def _finish(sort, exprs, transitions, alphabet):
    return Lts(
        sort,
        tuple(range(len(exprs))),
        0,
        frozenset(transitions),
        _alphabet_of(transitions, alphabet),
        {i: render(x) for i, x in enumerate(exprs)},
    )


def reach(t: Lts, s) -> Lts:
    """Restriction of ``t`` to the states reachable from ``s``, rooted at ``s``."""
    adj = t._adjacency()
    if s not in adj:
        raise UnknownState(f"unknown state {s!r}")
    seen = {s}
    queue = deque([s])
    while queue:
        for tr in adj[queue.popleft()]:
            if tr.target not in seen:
                seen.add(tr.target)
                queue.append(tr.target)
    payload = None if t.payload is None else {k: v for k, v in t.payload.items() if k in seen}
    return Lts(
        t.sort,
        tuple(x for x in t.states if x in seen),
        s,
        frozenset(tr for tr in t.transitions if tr.source in seen),
        t.alphabet,
        payload,
    )


def _pair(i, j):
    return f"({i},{j})"


def _merge_alphabets(a, b):
    return a + tuple(x for x in b if x not in a)


def free_product(s: Lts, t: Lts) -> Lts:
    """Tensor of two LTSs: state pairs, transition pairs, concatenated labels."""
    states = tuple(_pair(i, j) for i in s.states for j in t.states)
    trans = frozenset(
        Transition(
            _pair(e.source, f.source),
            Label(e.label.left + f.label.left, e.label.right + f.label.right),
            _pair(e.target, f.target),
        )
        for e in s.transitions
        for f in t.transitions
    )
    sort = Sort(s.sort.left + t.sort.left, s.sort.right + t.sort.right)
    return Lts(sort, states, _pair(s.initial, t.initial), trans, _merge_alphabets(s.alphabet, t.alphabet))


def compose_light(s: Lts, t: Lts) -> Lts:
    """Span composition, made light: the middle vectors must agree and are hidden."""
    if s.sort.right != t.sort.left:
        raise SortMismatch(f"cannot compose LTSs of sorts {s.sort} and {t.sort}")
    by_left = {}
    for f in t.transitions:
        by_left.setdefault(f.label.left, []).append(f)
    trans = set()
    for e in s.transitions:
        for f in by_left.get(e.label.right, ()):
            trans.add(
                Transition(
                    _pair(e.source, f.source),
                    Label(e.label.left, f.label.right),
                    _pair(e.target, f.target),
                )
            )
    states = tuple(_pair(i, j) for i in s.states for j in t.states)
    sort = Sort(s.sort.left, t.sort.right)
    return Lts(sort, states, _pair(s.initial, t.initial), frozenset(trans), _merge_alphabets(s.alphabet, t.alphabet))


# -- isomorphism ------------------------------------------------------------


def _refine(s, t):
    """Stable colouring of the disjoint union of ``s`` and ``t``."""
    nodes = [(0, x) for x in s.states] + [(1, y) for y in t.states]
    out = {n: [] for n in nodes}
    inn = {n: [] for n in nodes}
    for side, lts in ((0, s), (1, t)):
        for tr in lts.transitions:
            out[(side, tr.source)].append((tr.label, (side, tr.target)))
            inn[(side, tr.target)].append((tr.label, (side, tr.source)))
    colour = {n: int(n[1] == (s.initial if n[0] == 0 else t.initial)) for n in nodes}
    classes = len(set(colour.values()))
    while True:
        sig = {
            n: (
                colour[n],
                tuple(sorted((lab, colour[v]) for lab, v in out[n])),
                tuple(sorted((lab, colour[u]) for lab, u in inn[n])),
            )
            for n in nodes
        }
        palette = {c: i for i, c in enumerate(sorted(set(sig.values())))}
        colour = {n: palette[sig[n]] for n in nodes}
        if len(palette) == classes:
            return colour
        classes = len(palette)


def isomorphic(s: Lts, t: Lts) -> Optional[dict]:
    """A label-preserving state bijection mapping initial to initial, or None.

    Colour refinement on label-degree signatures narrows the candidates;
    backtracking with incremental edge checks completes the search.  Exact.
    """
    if s.sort != t.sort or len(s.states) != len(t.states) or len(s.transitions) != len(t.transitions):
        return None
    if Counter(tr.label for tr in s.transitions) != Counter(tr.label for tr in t.transitions):
        return None
    colour = _refine(s, t)
    cs = Counter(colour[(0, x)] for x in s.states)
    ct = Counter(colour[(1, y)] for y in t.states)
    if cs != ct:
        return None

    s_out = {x: [] for x in s.states}
    s_in = {x: [] for x in s.states}
    for tr in s.transitions:
        s_out[tr.source].append((tr.label, tr.target))
        s_in[tr.target].append((tr.label, tr.source))
    t_out = {y: set() for y in t.states}
    t_in = {y: set() for y in t.states}
    for tr in t.transitions:
        t_out[tr.source].add((tr.label, tr.target))
        t_in[tr.target].add((tr.label, tr.source))
    by_colour = {}
    for y in t.states:
        by_colour.setdefault(colour[(1, y)], []).append(y)

    # visit s in BFS order over both edge directions so constraints bite early
    order, seen = [], set()
    for start in [s.initial] + sorted(s.states, key=lambda x: cs[colour[(0, x)]]):
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        while queue:
            x = queue.popleft()
            order.append(x)
            for _, y in s_out[x] + s_in[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        if len(order) == len(s.states):
            break

    fwd, back = {}, {}

    def consistent(x, y):
        n_s = n_t = 0
        for lab, u in s_out[x]:
            if u in fwd or u == x:
                if (lab, y if u == x else fwd[u]) not in t_out[y]:
                    return False
                n_s += 1
        for lab, u in s_in[x]:
            if u in fwd:
                if (lab, fwd[u]) not in t_in[y]:
                    return False
                n_s += 1
        for _, v in t_out[y]:
            if v in back or v == y:
                n_t += 1
        for _, v in t_in[y]:
            if v in back:
                n_t += 1
        return n_s == n_t

    def search(k):
        if k == len(order):
            return True
        x = order[k]
        cands = [t.initial] if x == s.initial else by_colour[colour[(0, x)]]
        for y in cands:
            if y in back or not consistent(x, y):
                continue
            fwd[x], back[y] = y, x
            if search(k + 1):
                return True
            del fwd[x], back[y]
        return False

    with recursion_headroom(len(order) + 2000):
        found = search(0)
    return dict(fwd) if found else None


# -- analysis ---------------------------------------------------------------


def deadlocks(t: Lts, strict: bool = False) -> tuple:
    """States that cannot move to a different state.

    By default a state whose only transitions are self-loops counts as
    deadlocked (idling on silent actions is not progress).  With
    ``strict=True`` only states with no transitions at all are reported.
    """
    adj = t._adjacency()
    if strict:
        return tuple(x for x in t.states if not adj[x])
    return tuple(x for x in t.states if all(tr.target == x for tr in adj[x]))


def find_path(t: Lts, start, goal) -> Optional[list]:
    """Shortest transition sequence from ``start`` to ``goal``, or None."""
    adj = t._adjacency()
    for x in (start, goal):
        if x not in adj:
            raise UnknownState(f"unknown state {x!r}")
    if start == goal:
        return []
    back = {start: None}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for tr in adj[x]:
            if tr.target in back:
                continue
            back[tr.target] = tr
            if tr.target == goal:
                path = []
                while tr is not None:
                    path.append(tr)
                    tr = back[tr.source]
                return path[::-1]
            queue.append(tr.target)
    return None
