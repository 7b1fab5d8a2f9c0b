"""One-step transitions out of an expression (rules Sum, Par, ComPar, Rec)."""

from __future__ import annotations

import sys
from contextlib import contextmanager
from typing import NamedTuple

from .errors import DepthExceeded
from .kernel import Expr, Fix, Label, Star, Sum, Tensor, VarRef, alpha_canonical, render, unfold

DEFAULT_MAX_DEPTH = 1000


class Step(NamedTuple):
    label: Label
    target: Expr


@contextmanager
def recursion_headroom(limit):
    old = sys.getrecursionlimit()
    if old < limit:
        sys.setrecursionlimit(limit)
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


def ordered(steps):
    """Canonical order of a step set: by label, then by printed target."""
    return tuple(sorted(steps, key=lambda s: (s.label, render(s.target))))


class Deriver:
    """Derives step sets, memoising results across calls.

    Recursion is read as a least fixed point: unfolding a fix that is
    already being unfolded further up the derivation contributes nothing.
    A result is memoised only when it did not depend on such a cut-off
    (other than a cut-off on the term itself), so the memo never leaks a
    context-dependent answer.
    """

    def __init__(self, max_depth: int = DEFAULT_MAX_DEPTH):
        self.max_depth = max_depth
        self._memo = {}
        self._active = set()

    def steps(self, e: Expr) -> tuple:
        with recursion_headroom(10_000 + 8 * self.max_depth):
            found, _ = self._derive(e)
        return ordered(found)

    def _derive(self, e):
        hit = self._memo.get(e)
        if hit is not None:
            return hit, frozenset()

        if isinstance(e, VarRef):
            found, cut = frozenset(), frozenset()
        elif isinstance(e, Sum):
            found = frozenset(Step(lab, alpha_canonical(body)) for lab, body in e.branches)
            cut = frozenset()
        elif isinstance(e, Tensor):
            left, cut_l = self._derive(e.lhs)
            right, cut_r = self._derive(e.rhs) if left else (frozenset(), frozenset())
            cut = cut_l | cut_r
            found = frozenset(
                Step(Label(a.left + b.left, a.right + b.right), Tensor(p, q))
                for a, p in left
                for b, q in right
            )
        elif isinstance(e, Star):
            left, cut_l = self._derive(e.lhs)
            right, cut_r = self._derive(e.rhs) if left else (frozenset(), frozenset())
            cut = cut_l | cut_r
            by_middle = {}
            for b, q in right:
                by_middle.setdefault(b.left, []).append((b.right, q))
            found = frozenset(
                Step(Label(a.left, c), Star(p, q))
                for a, p in left
                for c, q in by_middle.get(a.right, ())
            )
        elif isinstance(e, Fix):
            if e in self._active:
                return frozenset(), frozenset((e,))
            if len(self._active) >= self.max_depth:
                raise DepthExceeded(f"more than {self.max_depth} nested unfoldings")
            self._active.add(e)
            try:
                found, cut = self._derive(unfold(e))
            finally:
                self._active.discard(e)
            cut = cut - {e}
        else:
            raise TypeError(f"not an expression: {e!r}")

        if not cut:
            self._memo[e] = found
        return found, cut


def step(e: Expr, max_depth: int = DEFAULT_MAX_DEPTH) -> tuple:
    """All transitions out of ``e``, as a canonically ordered tuple of Steps.

    Targets are alpha-canonical.  Same-label same-target derivations
    collapse.  Free variables have no transitions.
    """
    return Deriver(max_depth).steps(e)


class GuardReport(NamedTuple):
    path: tuple
    variable: str
    guarded: bool


def step_closure_guard(e: Expr) -> list:
    """For every fix binding in ``e``: is each bound-variable occurrence under a prefix?"""
    reports = []
    _guard_walk(e, (), reports)
    return reports


def _guard_walk(e, path, reports):
    if isinstance(e, Sum):
        for i, (_, b) in enumerate(e.branches):
            _guard_walk(b, path + (f"branch[{i}]",), reports)
    elif isinstance(e, (Tensor, Star)):
        _guard_walk(e.lhs, path + ("lhs",), reports)
        _guard_walk(e.rhs, path + ("rhs",), reports)
    elif isinstance(e, Fix):
        bound = set(e.variables)
        for v, body in e.bindings:
            reports.append(GuardReport(path, v.name, not _exposed(body, bound)))
        for v, body in e.bindings:
            _guard_walk(body, path + (f"binding[{v.name}]",), reports)


def _exposed(e, bound):
    """Does some variable in ``bound`` occur in ``e`` outside every prefix?"""
    if isinstance(e, VarRef):
        return e.var in bound
    if isinstance(e, Sum):
        return False
    if isinstance(e, (Tensor, Star)):
        return _exposed(e.lhs, bound) or _exposed(e.rhs, bound)
    inner = bound - set(e.variables)
    return any(_exposed(b, inner) for _, b in e.bindings)
