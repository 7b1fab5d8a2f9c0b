"""Executable checks of the algebra's structural claims.

Every check compares two LTSs with :func:`tcpalgebra.lts.isomorphic` and
returns a :class:`LawReport`.  A failing report always carries a concrete
witness: a differing state or transition count, or a label that occurs a
different number of times (with an example transition), or, when all of
those agree, the fact that the exhaustive bijection search came up empty.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .errors import NotLight, UnknownState
from .kernel import (
    BUILTIN_WIRES,
    TAU,
    Alphabet,
    Expr,
    Fix,
    Label,
    Sort,
    Star,
    Sum,
    Tensor,
    Var,
    VarRef,
    WireRelation,
    builtin_wire,
    sort_of,
)
from .lts import DEFAULT_MAX_STATES, Lts, Transition, compose_light, free_product, isomorphic, reach, sem
from .sos import step
from .syntax import print_expr


@dataclass
class LawReport:
    law: str
    operands: tuple
    holds: bool
    witness: Optional[dict] = None
    details: dict = field(default_factory=dict)

    def to_text(self) -> str:
        verdict = "holds" if self.holds else "FAILS"
        line = f"{self.law}: {verdict}"
        if self.witness:
            line += f" [{', '.join(f'{k}={v}' for k, v in self.witness.items())}]"
        return line

    def to_dict(self) -> dict:
        return {
            "law": self.law,
            "operands": list(self.operands),
            "verdict": "holds" if self.holds else "fails",
            "witness": self.witness,
            "details": self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)


def discrepancy(s: Lts, t: Lts) -> Optional[dict]:
    """A concrete reason why ``s`` and ``t`` are not isomorphic, or None if they are."""
    if s.sort != t.sort:
        return {"kind": "sort", "lhs": str(s.sort), "rhs": str(t.sort)}
    if len(s.states) != len(t.states):
        return {"kind": "state_count", "lhs": len(s.states), "rhs": len(t.states)}
    if len(s.transitions) != len(t.transitions):
        return {"kind": "transition_count", "lhs": len(s.transitions), "rhs": len(t.transitions)}
    cs = Counter(tr.label for tr in s.transitions)
    ct = Counter(tr.label for tr in t.transitions)
    for lab in sorted(set(cs) | set(ct)):
        if cs[lab] != ct[lab]:
            side, lts = ("lhs", s) if cs[lab] > ct[lab] else ("rhs", t)
            example = next(tr for tr in lts.ordered_transitions() if tr.label == lab)
            return {
                "kind": "label_count",
                "label": str(lab),
                "lhs": cs[lab],
                "rhs": ct[lab],
                "example_side": side,
                "example": f"{example.source} -{lab}-> {example.target}",
            }
    if isomorphic(s, t) is None:
        return {"kind": "no_bijection", "states": len(s.states), "transitions": len(s.transitions)}
    return None


def _compare(law, operands, lhs: Lts, rhs: Lts, **details) -> LawReport:
    witness = discrepancy(lhs, rhs)
    details.update(lhs_states=len(lhs.states), rhs_states=len(rhs.states))
    return LawReport(law, tuple(operands), witness is None, witness, details)


def check_equivalent(law: str, lhs: Expr, rhs: Expr, max_states: int = DEFAULT_MAX_STATES) -> LawReport:
    """Do two expressions have isomorphic semantics?"""
    return _compare(law, (print_expr(lhs), print_expr(rhs)), sem(lhs, max_states), sem(rhs, max_states))


# -- reachable LTS to expression --------------------------------------------


def synth_expr(t: Lts, s) -> Fix:
    """An expression whose semantics is ``reach(t, s)``, with ``s`` as its initial state.

    One binding per reachable state; each body sums the state's outgoing
    transitions, and a state with none gets the empty sum.
    """
    if len(set(t.transitions)) != len(t.transitions):
        raise NotLight("transition system has duplicate (source, label, target) triples")
    if s not in set(t.states):
        raise UnknownState(f"unknown state {s!r}")
    r = reach(t, s)
    names = {x: Var(f"X{i}", r.sort) for i, x in enumerate(r.states)}
    bindings = tuple(
        (names[x], Sum(tuple((tr.label, VarRef(names[tr.target])) for tr in r.outgoing(x)), r.sort))
        for x in r.states
    )
    return Fix(r.states.index(s), bindings)


def check_prop1(t: Lts, s, max_states: int = DEFAULT_MAX_STATES) -> LawReport:
    target = reach(t, s)
    e = synth_expr(t, s)
    got = sem(e, max_states)
    report = _compare("synthesis round-trip", (f"reach(T, {s!r})",), got, target)
    if report.holds:
        theta = isomorphic(got, target)
        report.details["theta_initial"] = theta[got.initial]
        report.holds = theta[got.initial] == s
    return report


# -- compositionality -------------------------------------------------------


def check_prop2_tensor(p: Expr, q: Expr, max_states: int = DEFAULT_MAX_STATES) -> LawReport:
    lhs = sem(Tensor(p, q), max_states)
    sp, sq = sem(p, max_states), sem(q, max_states)
    prod = free_product(sp, sq)
    rhs = reach(prod, prod.initial)
    return _compare("Sem(P || Q) = Reach(Sem P (x) Sem Q)", (print_expr(p), print_expr(q)), lhs, rhs)


def check_prop2_star(p: Expr, q: Expr, max_states: int = DEFAULT_MAX_STATES) -> LawReport:
    lhs = sem(Star(p, q), max_states)
    sp, sq = sem(p, max_states), sem(q, max_states)
    comp = compose_light(sp, sq)
    rhs = reach(comp, comp.initial)
    return _compare("Sem(P ; Q) = Reach(Sem P * Sem Q)", (print_expr(p), print_expr(q)), lhs, rhs)


_OPS = {"star": Star, ";": Star, "⋆": Star, "tensor": Tensor, "||": Tensor, "⊗": Tensor}


def _reassociate(e, op):
    """(a op b) op c  ->  a op (b op c), applied at the root."""
    return op(e.lhs.lhs, op(e.lhs.rhs, e.rhs))


def check_assoc(p: Expr, q: Expr, r: Expr, op="star", max_states: int = DEFAULT_MAX_STATES) -> LawReport:
    """Both bracketings: one-step transitions biject (label-preserving) and semantics agree."""
    cons = _OPS[op]
    left = cons(cons(p, q), r)
    right = cons(p, cons(q, r))
    steps_l = {(st.label, _reassociate(st.target, cons)) for st in step(left)}
    steps_r = {(st.label, st.target) for st in step(right)}
    one_step = steps_l == steps_r
    lhs, rhs = sem(left, max_states), sem(right, max_states)
    report = _compare(
        f"associativity of {'; ' if cons is Star else '||'}".rstrip(),
        (print_expr(p), print_expr(q), print_expr(r)),
        lhs,
        rhs,
        one_step_bijection=one_step,
        one_step_count=len(steps_r),
    )
    report.details["full_iso"] = report.holds
    if not one_step:
        only = sorted(steps_l ^ steps_r, key=lambda x: (x[0], str(x[1])))[0]
        side = "lhs" if only in steps_l else "rhs"
        report.holds = False
        report.witness = report.witness or {
            "kind": "one_step",
            "side": side,
            "label": str(only[0]),
            "target": print_expr(only[1]),
        }
    return report


# -- wires ------------------------------------------------------------------


def check_wire_laws(a: Alphabet) -> list:
    """Coassociativity, counit, separability, Frobenius, unit and snake laws."""
    w = {name: builtin_wire(name, a) for name in BUILTIN_WIRES}
    idw, dup, codup, eps, eta, discard = (w[n] for n in ("id", "dup", "codup", "eps", "eta", "discard"))
    laws = [
        ("coassociativity", Star(dup, Tensor(idw, dup)), Star(dup, Tensor(dup, idw))),
        ("counit", Star(dup, Tensor(idw, discard)), idw),
        ("counit (left)", Star(dup, Tensor(discard, idw)), idw),
        ("separability", Star(dup, codup), idw),
        ("frobenius (left = middle)", Star(Tensor(idw, dup), Tensor(codup, idw)), Star(codup, dup)),
        ("frobenius (middle = right)", Star(codup, dup), Star(Tensor(dup, idw), Tensor(idw, codup))),
        ("snake", Star(Tensor(idw, eta), Tensor(eps, idw)), idw),
    ]
    for name in ("id", "dup", "discard"):
        laws.append((f"identity: id ; {name}", Star(idw, w[name]), w[name]))
    for name in ("codup", "eta"):
        if sort_of(w[name]).right == 1:
            laws.append((f"identity: {name} ; id", Star(w[name], idw), w[name]))
    return [check_equivalent(name, lhs, rhs) for name, lhs, rhs in laws]


# -- random corpora ---------------------------------------------------------


def _random_label(rng, sort, actions):
    return Label(
        tuple(rng.choice(actions) for _ in range(sort.left)),
        tuple(rng.choice(actions) for _ in range(sort.right)),
    )


def random_term(
    rng: random.Random,
    sort: Sort,
    depth: int,
    alphabet: Alphabet,
    max_arity: int = 2,
) -> Expr:
    """A closed, well-formed term of the given sort, built sort-directed.

    Constructors: nil, prefix sums of at most three branches, built-in
    wires, tensor, communicating parallel (middle arity at most
    ``max_arity``) and fix with at most two bindings, whose variables are
    only used beneath a prefix and never inside a parallel operand.  The
    last restriction keeps the state space finite: ``fix X { X = </a>.X ; id }``
    grows a new ``; id`` with every step.
    """
    return _gen(rng, Sort(*sort), depth, alphabet, (), (), max_arity)


def _gen(rng, sort, depth, alphabet, usable, pending, max_arity):
    wires = [n for n, r in BUILTIN_WIRES.items() if r.sort == sort]
    vars_here = [v for v in usable if v.sort == sort]
    options = ["nil", "sum"]
    if wires:
        options += ["wire"] * 2
    if vars_here:
        options += ["var"] * 2
    if depth > 0:
        options += ["sum", "tensor", "star", "fix"]
    kind = rng.choice(options)
    if kind == "nil":
        return Sum((), sort)
    if kind == "wire":
        return builtin_wire(rng.choice(wires), alphabet)
    if kind == "var":
        return VarRef(rng.choice(vars_here))
    if kind == "sum":
        inner = usable + pending
        branches = []
        for _ in range(rng.randint(1, 3)):
            if depth > 0:
                body = _gen(rng, sort, depth - 1, alphabet, inner, (), max_arity)
            else:
                here = [v for v in inner if v.sort == sort]
                body = VarRef(rng.choice(here)) if here and rng.random() < 0.7 else Sum((), sort)
            branches.append((_random_label(rng, sort, alphabet.actions), body))
        return Sum(tuple(branches), sort)
    if kind == "tensor":
        m1 = rng.randint(0, sort.left)
        n1 = rng.randint(0, sort.right)
        return Tensor(
            _gen(rng, Sort(m1, n1), depth - 1, alphabet, (), (), max_arity),
            _gen(rng, Sort(sort.left - m1, sort.right - n1), depth - 1, alphabet, (), (), max_arity),
        )
    if kind == "star":
        k = rng.randint(0, max_arity)
        return Star(
            _gen(rng, Sort(sort.left, k), depth - 1, alphabet, (), (), max_arity),
            _gen(rng, Sort(k, sort.right), depth - 1, alphabet, (), (), max_arity),
        )
    taken = {v.name for v in usable + pending}
    n = rng.randint(1, 2)
    fresh = []
    for i in range(n):
        s = sort if i == 0 else Sort(rng.randint(0, max_arity), rng.randint(0, max_arity))
        k = len(taken)
        while f"Y{k}" in taken:
            k += 1
        taken.add(f"Y{k}")
        fresh.append(Var(f"Y{k}", s))
    bindings = tuple(
        (v, _gen(rng, v.sort, depth - 1, alphabet, usable, pending + tuple(fresh), max_arity)) for v in fresh
    )
    return Fix(0, bindings)


def random_lts(
    rng: random.Random,
    max_states: int = 8,
    max_actions: int = 3,
    max_sort: tuple = (2, 2),
    max_out: int = 3,
) -> Lts:
    """A random light LTS; its initial state is chosen at random."""
    n = rng.randint(1, max_states)
    actions = (TAU, "a", "b")[: rng.randint(1, max_actions)]
    sort = Sort(rng.randint(0, max_sort[0]), rng.randint(0, max_sort[1]))
    trans = set()
    for x in range(n):
        for _ in range(rng.randint(0, max_out)):
            trans.add(Transition(x, _random_label(rng, sort, actions), rng.randrange(n)))
    return Lts(sort, tuple(range(n)), rng.randrange(n), frozenset(trans), actions)


def random_wire_relation(rng: random.Random, sort: Sort, max_pairs: int = 3) -> WireRelation:
    n = sort.left + sort.right
    pairs = set()
    if n:
        for _ in range(rng.randint(0, max_pairs)):
            pairs.add((rng.randint(1, n), rng.randint(1, n)))
    return WireRelation(sort, frozenset(pairs))


def random_sort(rng: random.Random, max_arity: int = 2) -> Sort:
    return Sort(rng.randint(0, max_arity), rng.randint(0, max_arity))


def builtin_corpus(seed: int = 0, samples: int = 200, depth: int = 3) -> list:
    """Wire laws, the philosopher checks and seeded random compositionality samples."""
    from .models import load_model

    reports = check_wire_laws(Alphabet((TAU, "l", "u")))
    phil = load_model("dinphil.tcp")
    ph, fk = phil["Ph"], phil["Fk"]
    reports.append(check_prop2_star(ph, fk))
    reports.append(check_prop2_tensor(ph, fk))
    reports.append(check_assoc(ph, fk, ph, "star"))
    reports.append(check_assoc(ph, fk, ph, "tensor"))
    rng = random.Random(seed)
    alphabet = Alphabet((TAU, "a"))
    for _ in range(samples):
        m, k, n = (rng.randint(0, 2) for _ in range(3))
        p = random_term(rng, Sort(m, k), depth, alphabet)
        q = random_term(rng, Sort(k, n), depth, alphabet)
        reports.append(check_prop2_star(p, q))
        reports.append(check_prop2_tensor(p, q))
    for _ in range(samples // 2):
        t = random_lts(rng)
        reports.append(check_prop1(t, rng.choice(t.states)))
    return reports


__all__ = [
    "LawReport",
    "builtin_corpus",
    "check_assoc",
    "check_equivalent",
    "check_prop1",
    "check_prop2_star",
    "check_prop2_tensor",
    "check_wire_laws",
    "discrepancy",
    "random_lts",
    "random_sort",
    "random_term",
    "random_wire_relation",
    "synth_expr",
]
