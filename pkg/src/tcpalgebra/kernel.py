"""Terms of the TCP process algebra.

Expressions are immutable trees.  Every node lazily memoises a handful of
derived facts (hash, sort, free variables, rendered text, canonical form)
in its instance dictionary; the memos never take part in equality, so they
are invisible to callers.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, fields
from typing import Iterable, Mapping, NamedTuple

from .errors import SortMismatch

TAU = "tau"


class Sort(NamedTuple):
    left: int
    right: int

    def __str__(self):
        return f"{self.left} -> {self.right}"


class Label(NamedTuple):
    """An action vector in A^m x A^n, split into its left and right parts.

    Tuple ordering (left vector, then right vector, lexicographically by
    action name) is the canonical order used throughout the package.
    """

    left: tuple
    right: tuple

    @property
    def sort(self) -> Sort:
        return Sort(len(self.left), len(self.right))

    def __str__(self):
        return f"<{','.join(self.left)}/{','.join(self.right)}>"


def label(left: Iterable[str] = (), right: Iterable[str] = ()) -> Label:
    return Label(tuple(left), tuple(right))


@dataclass(frozen=True)
class Alphabet:
    """A finite, ordered action set that contains the silent action."""

    actions: tuple

    def __post_init__(self):
        actions = tuple(self.actions)
        object.__setattr__(self, "actions", actions)
        if not actions:
            raise ValueError("alphabet must be nonempty")
        if len(set(actions)) != len(actions):
            raise ValueError(f"duplicate actions in alphabet {actions}")
        if TAU not in actions:
            raise ValueError("alphabet must contain the silent action 'tau'")

    @property
    def silent(self) -> str:
        return TAU

    def __contains__(self, action):
        return action in self.actions

    def __iter__(self):
        return iter(self.actions)

    def __len__(self):
        return len(self.actions)

    def labels(self, sort: Sort):
        """Every label of the given sort, in alphabet order."""
        n = sort.left + sort.right
        for vec in itertools.product(self.actions, repeat=n):
            yield Label(vec[: sort.left], vec[sort.left :])


class Var(NamedTuple):
    """A process variable; identity is the pair (name, sort)."""

    name: str
    sort: Sort


# -- expressions ------------------------------------------------------------


class Expr:
    """Base class of the expression tree.  Use the concrete subclasses."""

    def _memo(self, key, compute):
        d = self.__dict__
        try:
            return d[key]
        except KeyError:
            value = compute()
            d[key] = value
            return value

    @property
    def sort(self) -> Sort:
        return sort_of(self)

    def __str__(self):
        return render(self)


def _term(cls):
    """Turn ``cls`` into a frozen dataclass with a cached structural hash."""
    cls = dataclass(frozen=True, eq=False, repr=True)(cls)
    names = tuple(f.name for f in fields(cls))
    tag = cls.__name__

    def __hash__(self):
        d = self.__dict__
        h = d.get("_h")
        if h is None:
            h = hash((tag,) + tuple(getattr(self, n) for n in names))
            d["_h"] = h
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if other.__class__ is not self.__class__:
            return NotImplemented
        if hash(self) != hash(other):
            return False
        return all(getattr(self, n) == getattr(other, n) for n in names)

    cls.__hash__ = __hash__
    cls.__eq__ = __eq__
    return cls


@_term
class VarRef(Expr):
    var: Var


@_term
class Sum(Expr):
    """Guarded choice; an empty branch tuple is the deadlocked process."""

    branches: tuple  # of (Label, Expr)
    declared: Sort

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple((Label(*lab), body) for lab, body in self.branches))
        object.__setattr__(self, "declared", Sort(*self.declared))


@_term
class Tensor(Expr):
    lhs: Expr
    rhs: Expr


@_term
class Star(Expr):
    lhs: Expr
    rhs: Expr


@_term
class Fix(Expr):
    """Component ``selected`` of a system of mutually recursive equations."""

    selected: int
    bindings: tuple  # of (Var, Expr)

    def __post_init__(self):
        object.__setattr__(self, "bindings", tuple((Var(*v), body) for v, body in self.bindings))

    @property
    def variables(self):
        return tuple(v for v, _ in self.bindings)


def nil(left: int, right: int) -> Sum:
    return Sum((), Sort(left, right))


def prefix(lab: Label, body: Expr) -> Sum:
    return Sum(((lab, body),), lab.sort)


def var(name: str, left: int, right: int) -> VarRef:
    return VarRef(Var(name, Sort(left, right)))


def tensor(*parts: Expr) -> Expr:
    """Left-nested non-communicating parallel of one or more expressions."""
    out = parts[0]
    for p in parts[1:]:
        out = Tensor(out, p)
    return out


def star(*parts: Expr) -> Expr:
    """Left-nested communicating parallel of one or more expressions."""
    out = parts[0]
    for p in parts[1:]:
        out = Star(out, p)
    return out


# -- sorts ------------------------------------------------------------------


def sort_of(e: Expr) -> Sort:
    """The unique sort of ``e``; raises SortMismatch on ill-formed terms."""
    return _sort(e, ())


def _sort(e, path):
    d = e.__dict__
    s = d.get("_sort")
    if s is not None:
        return s
    if isinstance(e, VarRef):
        s = e.var.sort
    elif isinstance(e, Sum):
        s = e.declared
        for i, (lab, body) in enumerate(e.branches):
            where = path + (f"branch[{i}]",)
            if lab.sort != s:
                raise SortMismatch(f"label {lab} has sort {lab.sort}, sum has sort {s}", where)
            bs = _sort(body, where)
            if bs != s:
                raise SortMismatch(f"branch body has sort {bs}, sum has sort {s}", where)
    elif isinstance(e, Tensor):
        a = _sort(e.lhs, path + ("lhs",))
        b = _sort(e.rhs, path + ("rhs",))
        s = Sort(a.left + b.left, a.right + b.right)
    elif isinstance(e, Star):
        a = _sort(e.lhs, path + ("lhs",))
        b = _sort(e.rhs, path + ("rhs",))
        if a.right != b.left:
            raise SortMismatch(
                f"communicating parallel of {a} and {b}: {a.right} right interfaces "
                f"cannot meet {b.left} left interfaces",
                path,
            )
        s = Sort(a.left, b.right)
    elif isinstance(e, Fix):
        if not e.bindings:
            raise SortMismatch("fix with no bindings", path)
        names = [v.name for v in e.variables]
        if len(set(names)) != len(names):
            raise SortMismatch(f"fix binds a variable name twice: {names}", path)
        if not 0 <= e.selected < len(e.bindings):
            raise SortMismatch(f"fix selects component {e.selected} of {len(e.bindings)}", path)
        for v, body in e.bindings:
            where = path + (f"binding[{v.name}]",)
            bs = _sort(body, where)
            if bs != v.sort:
                raise SortMismatch(f"body of {v.name} has sort {bs}, variable has sort {v.sort}", where)
        s = e.bindings[e.selected][0].sort
    else:
        raise TypeError(f"not an expression: {e!r}")
    d["_sort"] = s
    return s


# -- free variables and substitution ----------------------------------------


def free_vars(e: Expr) -> frozenset:
    return e._memo("_fv", lambda: _free_vars(e))


def _free_vars(e):
    if isinstance(e, VarRef):
        return frozenset((e.var,))
    if isinstance(e, Sum):
        return frozenset().union(*(free_vars(b) for _, b in e.branches))
    if isinstance(e, (Tensor, Star)):
        return free_vars(e.lhs) | free_vars(e.rhs)
    bound = set(e.variables)
    return frozenset().union(*(free_vars(b) for _, b in e.bindings)) - bound


def is_closed(e: Expr) -> bool:
    return not free_vars(e)


def _all_names(e, acc):
    if isinstance(e, VarRef):
        acc.add(e.var.name)
    elif isinstance(e, Sum):
        for _, b in e.branches:
            _all_names(b, acc)
    elif isinstance(e, (Tensor, Star)):
        _all_names(e.lhs, acc)
        _all_names(e.rhs, acc)
    else:
        for v, b in e.bindings:
            acc.add(v.name)
            _all_names(b, acc)
    return acc


def substitute(e: Expr, bindings: Mapping[Var, Expr]) -> Expr:
    """Simultaneously replace free occurrences of variables.

    Capture-avoiding: a Fix whose binders would capture a free variable of a
    replacement has its binders renamed first.
    """
    for v, rep in bindings.items():
        rs = sort_of(rep)
        if rs != v.sort:
            raise SortMismatch(f"cannot substitute a {rs} expression for {v.name} : {v.sort}")
    return _subst(e, dict(bindings), {})


def _subst(e, sigma, memo):
    if not sigma:
        return e
    fv = free_vars(e)
    if not any(v in fv for v in sigma):
        return e
    key = id(e)
    hit = memo.get(key)
    if hit is not None and hit[0] is e:
        return hit[1]
    if isinstance(e, VarRef):
        out = sigma.get(e.var, e)
    elif isinstance(e, Sum):
        out = Sum(tuple((lab, _subst(b, sigma, memo)) for lab, b in e.branches), e.declared)
    elif isinstance(e, (Tensor, Star)):
        out = type(e)(_subst(e.lhs, sigma, memo), _subst(e.rhs, sigma, memo))
    else:
        orig = e
        inner = {v: r for v, r in sigma.items() if v not in e.variables and v in fv}
        captured = set()
        for r in inner.values():
            captured |= {v.name for v in free_vars(r)}
        binders = e.variables
        if captured & {v.name for v in binders}:
            taken = _all_names(e, set()) | captured
            for r in inner.values():
                _all_names(r, taken)
            renames = {}
            for v in binders:
                if v.name in captured:
                    n = 1
                    while f"{v.name}_{n}" in taken:
                        n += 1
                    fresh = Var(f"{v.name}_{n}", v.sort)
                    taken.add(fresh.name)
                    renames[v] = VarRef(fresh)
            e = Fix(
                e.selected,
                tuple((renames[v].var if v in renames else v, _subst(b, renames, {})) for v, b in e.bindings),
            )
        out = Fix(e.selected, tuple((v, _subst(b, inner, {})) for v, b in e.bindings))
        e = orig
    memo[key] = (e, out)
    return out


def unfold(e: Fix) -> Expr:
    """Body of the selected binding with every binder replaced by its fix."""
    def compute():
        sigma = {v: Fix(j, e.bindings) for j, v in enumerate(e.variables)}
        return substitute(e.bindings[e.selected][1], sigma)

    return e._memo("_unfold", compute)


# -- rendering --------------------------------------------------------------

_STAR, _TENSOR, _FACTOR, _ATOM = range(4)


def render(e: Expr) -> str:
    """Concrete syntax for ``e`` as given (no canonicalisation)."""
    return _render(e)[0]


def _render(e):
    return e._memo("_text", lambda: _render_node(e))


def _at(e, level):
    text, own = _render(e)
    return text if own >= level else f"({text})"


def _render_node(e):
    if isinstance(e, VarRef):
        return e.var.name, _ATOM
    if isinstance(e, Sum):
        if not e.branches:
            return f"nil[{e.declared.left},{e.declared.right}]", _ATOM
        text = " + ".join(f"{lab}.{_at(b, _ATOM)}" for lab, b in e.branches)
        return text, _FACTOR
    if isinstance(e, Tensor):
        return f"{_at(e.lhs, _TENSOR)} || {_at(e.rhs, _FACTOR)}", _TENSOR
    if isinstance(e, Star):
        return f"{_at(e.lhs, _STAR)} ; {_at(e.rhs, _TENSOR)}", _STAR
    parts = " ".join(f"{v.name} : {v.sort.left} -> {v.sort.right} = {render(b)};" for v, b in e.bindings)
    return f"fix {e.bindings[e.selected][0].name} {{ {parts} }}", _ATOM


# -- alpha-canonical forms --------------------------------------------------


def alpha_canonical(e: Expr) -> Expr:
    """Deterministic representative of the alpha-equivalence class of ``e``.

    Fix binders are renamed by position: binding ``k`` of a fix whose bodies
    contain fixes nested ``h`` deep becomes ``V{k}_{h}`` (``k`` omitted when
    0, ``_h`` omitted when 0), with extra leading ``V``s if that would clash
    with a free variable.  Because the name depends only on the fix's own
    subtree, canonicalisation is compositional.  Sum branches are sorted by
    label and then by rendered body, and duplicates are dropped.
    """
    return e._memo("_canon", lambda: _canon(e))


def _fix_height(e):
    def compute():
        if isinstance(e, VarRef):
            return -1
        if isinstance(e, Sum):
            return max((_fix_height(b) for _, b in e.branches), default=-1)
        if isinstance(e, (Tensor, Star)):
            return max(_fix_height(e.lhs), _fix_height(e.rhs))
        return 1 + max(_fix_height(b) for _, b in e.bindings)

    return e._memo("_height", compute)


def canonical_name(prefix: str, index: int, height: int) -> str:
    return prefix + (str(index) if index else "") + (f"_{height}" if height else "")


def _canon(e):
    if isinstance(e, VarRef):
        out = e
    elif isinstance(e, Sum):
        seen = {}
        for lab, b in e.branches:
            cb = alpha_canonical(b)
            seen[(lab, cb)] = None
        ordered = sorted(seen, key=lambda lb: (lb[0], render(lb[1])))
        out = Sum(tuple(ordered), e.declared)
    elif isinstance(e, (Tensor, Star)):
        lhs, rhs = alpha_canonical(e.lhs), alpha_canonical(e.rhs)
        out = e if (lhs is e.lhs and rhs is e.rhs) else type(e)(lhs, rhs)
    else:
        bodies = [alpha_canonical(b) for _, b in e.bindings]
        height = 1 + max(_fix_height(b) for b in bodies)
        binders = e.variables
        outside = set()
        for b in bodies:
            outside |= {v.name for v in free_vars(b) if v not in binders}
        pre = "V"
        while any(canonical_name(pre, k, height) in outside for k in range(len(binders))):
            pre += "V"
        new = [Var(canonical_name(pre, k, height), v.sort) for k, v in enumerate(binders)]
        sigma = {v: VarRef(n) for v, n in zip(binders, new) if v != n}
        # renaming can reorder sum branches (they sort by rendered body)
        bodies = [alpha_canonical(_subst(b, sigma, {})) if sigma else b for b in bodies]
        out = Fix(e.selected, tuple(zip(new, bodies)))
    out.__dict__["_canon"] = out
    return out


# -- wires ------------------------------------------------------------------


@dataclass(frozen=True)
class WireRelation:
    """A relation on interface indices 1..m+n (left ports first)."""

    sort: Sort
    pairs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "sort", Sort(*self.sort))
        pairs = self.pairs
        if not isinstance(pairs, frozenset) or not all(type(i) is int and type(j) is int for i, j in pairs):
            pairs = frozenset((int(i), int(j)) for i, j in pairs)
            object.__setattr__(self, "pairs", pairs)
        n = self.sort.left + self.sort.right
        if self.sort.left < 0 or self.sort.right < 0:
            raise ValueError(f"negative sort {self.sort}")
        for i, j in pairs:
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"wire index pair ({i},{j}) outside [1..{n}]")

    def classes(self) -> tuple:
        """Equivalence classes of the generated equivalence, ordered by least member."""
        return _classes(self.sort.left + self.sort.right, self.pairs)

    def slots(self) -> tuple:
        """For each index 1..m+n, the position of its class in :meth:`classes`."""
        return _slots(self.sort.left + self.sort.right, self.pairs)


@functools.lru_cache(maxsize=1 << 17)
def _classes(n: int, pairs: frozenset) -> tuple:
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(1, n + 1):
        groups.setdefault(find(i), []).append(i)
    return tuple(tuple(g) for _, g in sorted(groups.items()))


@functools.lru_cache(maxsize=1 << 17)
def _slots(n: int, pairs: frozenset) -> tuple:
    slot = [0] * (n + 1)
    for c, members in enumerate(_classes(n, pairs)):
        for i in members:
            slot[i] = c
    return tuple(slot[1:])


def wire_label_set(r: WireRelation, a: Alphabet) -> tuple:
    """All labels whose components agree on every class generated by ``r``."""
    return _labels_for_slots(r.sort.left, r.slots(), a.actions)


@functools.lru_cache(maxsize=4096)
def _labels_for_slots(m: int, slots: tuple, actions: tuple) -> tuple:
    k = max(slots, default=-1) + 1
    out = []
    for choice in itertools.product(actions, repeat=k):
        vec = tuple(choice[c] for c in slots)
        out.append(Label(vec[:m], vec[m:]))
    return tuple(out)


def mk_wire(r: WireRelation, a: Alphabet) -> Fix:
    v = Var("V", r.sort)
    ref = VarRef(v)
    body = Sum(tuple((lab, ref) for lab in wire_label_set(r, a)), r.sort)
    return Fix(0, ((v, body),))


BUILTIN_WIRES = {
    "id": WireRelation(Sort(1, 1), {(1, 2)}),
    "dup": WireRelation(Sort(1, 2), {(1, 2), (1, 3)}),
    "codup": WireRelation(Sort(2, 1), {(1, 3), (2, 3)}),
    "eps": WireRelation(Sort(2, 0), {(1, 2)}),
    "eta": WireRelation(Sort(0, 2), {(1, 2)}),
    "discard": WireRelation(Sort(1, 0), ()),
}


def builtin_wire(name: str, a: Alphabet) -> Fix:
    return mk_wire(BUILTIN_WIRES[name], a)
