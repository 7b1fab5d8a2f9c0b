"""Acceptance criteria, each run at its stated size and time limit.

Every test records one PASS/FAIL line; the lines are printed together at
the end of the pytest run.
"""

import random
import time
from contextlib import contextmanager

import networkx as nx
import numpy as np

from conftest import ACCEPTANCE_LINES
from tcpalgebra import (
    Alphabet,
    Label,
    Sort,
    WireRelation,
    alpha_canonical,
    check_assoc,
    check_prop2_star,
    check_prop2_tensor,
    check_wire_laws,
    deadlocks,
    find_path,
    isomorphic,
    json_to_lts,
    lts_to_json,
    parse_expr,
    print_expr,
    reach,
    sem,
    step,
    synth_expr,
    wire_label_set,
)
from tcpalgebra.kernel import render
from tcpalgebra.verify import random_lts, random_sort, random_term

A2 = Alphabet(("tau", "a"))


@contextmanager
def criterion(number, title, limit):
    start = time.perf_counter()
    outcome = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        if elapsed < limit:
            outcome = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        ACCEPTANCE_LINES.append(f"{outcome} [{number}] {title} ({elapsed:.2f}s, limit {limit}s)")
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"


def test_philosopher_semantics(ph):
    with criterion(1, "Sem(Ph_0): 4 states, 8 transitions, non-silent moves form one 4-cycle", 1):
        t = sem(ph(0))
        assert (len(t.states), len(t.transitions)) == (4, 8)
        silent = Label(("tau",), ("tau",))
        moves = [tr for tr in t.transitions if tr.label != silent]
        assert len(moves) == 4
        succ = {tr.source: tr.target for tr in moves}
        assert len(succ) == 4
        x, visited = t.initial, []
        for _ in range(4):
            visited.append(x)
            x = succ[x]
        assert x == t.initial and sorted(visited) == sorted(t.states)
        assert all(tr.source == tr.target for tr in t.transitions if tr.label == silent)


def _successor_configs():
    # (philosopher A, fork A, philosopher B, fork B): idle, A takes its left
    # fork, B takes its left fork, both take their left forks
    return [(0, 0, 0, 0), (1, 0, 0, 2), (0, 2, 1, 0), (1, 2, 1, 2)]


def test_dinphil_successors(dinphil, ring, ph, fk):
    with criterion(2, "step(DinPhil_0): the 4 expected ring successors, silent one a self-loop", 1):
        e = dinphil["DinPhil"]
        steps = step(e)
        assert len(steps) == 4
        expected = {render(alpha_canonical(ring(ph(a), fk(b), ph(c), fk(d)))) for a, b, c, d in _successor_configs()}
        assert {render(st.target) for st in steps} == expected
        assert all(st.label == Label((), ()) for st in steps)
        assert alpha_canonical(e) in {st.target for st in steps}


def test_dinphil_deadlock(dinphil, ring, ph, fk):
    with criterion(3, "Sem(DinPhil_0): one deadlock (Ph_1,Fk_2,Ph_1,Fk_2), return paths exist", 1):
        t = sem(dinphil["DinPhil"])
        (dead,) = deadlocks(t)
        assert t.payload[dead] == render(alpha_canonical(ring(ph(1), fk(2), ph(1), fk(2))))
        by_text = {v: k for k, v in t.payload.items()}
        for config in _successor_configs()[1:3]:
            x = by_text[render(alpha_canonical(ring(*(f(i) for f, i in zip((ph, fk, ph, fk), config)))))]
            path = find_path(t, x, t.initial)
            assert path and path[0].source == x and path[-1].target == t.initial


def test_compositionality(ph, fk):
    with criterion(4, "Sem compositional for ; and || on (Ph_0, Fk_0) and 200 random pairs, depth <= 3", 60):
        assert check_prop2_star(ph(0), fk(0)).holds
        assert check_prop2_tensor(ph(0), fk(0)).holds
        rng = random.Random(2024)
        failures = []
        for _ in range(200):
            m, k, n = (rng.randint(0, 2) for _ in range(3))
            p = random_term(rng, Sort(m, k), 3, A2)
            q = random_term(rng, Sort(k, n), 3, A2)
            for check in (check_prop2_star, check_prop2_tensor):
                report = check(p, q)
                if not report.holds:
                    failures.append(report.to_text())
        assert failures == []


def test_assoc(ph, fk):
    with criterion(5, "associativity: philosopher chain and 100 random triples, both checks", 60):
        reports = [check_assoc(ph(0), fk(0), ph(0), op) for op in ("star", "tensor")]
        rng = random.Random(7)
        for _ in range(100):
            a, b, c, d = (rng.randint(0, 2) for _ in range(4))
            p = random_term(rng, Sort(a, b), 3, A2)
            q = random_term(rng, Sort(b, c), 3, A2)
            r = random_term(rng, Sort(c, d), 3, A2)
            reports += [check_assoc(p, q, r, op) for op in ("star", "tensor")]
        for rep in reports:
            assert rep.details["one_step_bijection"], rep.to_text()
            assert rep.details["full_iso"], rep.to_text()
            assert rep.holds


def test_wire_laws(abc):
    with criterion(6, "wire laws over {tau,l,u}: coassociativity, counit, separability, Frobenius", 5):
        reports = {r.law: r for r in check_wire_laws(abc)}
        for law in ("coassociativity", "counit", "separability", "frobenius (left = middle)", "frobenius (middle = right)"):
            r = reports[law]
            assert r.holds, r.to_text()
            assert r.details["lhs_states"] == r.details["rhs_states"] == 1
        assert all(r.holds for r in reports.values())


def test_synthesis_round_trip():
    with criterion(7, "synthesis round-trip on 100 random light LTSs", 60):
        rng = random.Random(11)
        for _ in range(100):
            t = random_lts(rng, max_states=8, max_actions=3, max_sort=(2, 2))
            s = rng.choice(t.states)
            got = sem(synth_expr(t, s))
            theta = isomorphic(got, reach(t, s))
            assert theta is not None and theta[got.initial] == s


def _label_grid(n, size):
    """Every vector in range(size)**n, one per row, and its row index."""
    grid = np.indices((size,) * n).reshape(n, -1).T if n else np.zeros((1, 0), dtype=int)
    return grid


def _brute_force_masks(n, size, pairs):
    """Row b says which vectors satisfy a_i = a_j for every pair in bitmask b."""
    grid = _label_grid(n, size)
    masks = np.ones((1 << len(pairs), len(grid)), dtype=bool)
    for bit, (i, j) in enumerate(pairs):
        agree = grid[:, i - 1] == grid[:, j - 1]
        lo = 1 << bit
        masks[lo : 2 * lo] = masks[:lo] & agree
    return grid, masks


def _class_count(n, pairs):
    g = nx.Graph()
    g.add_nodes_from(range(1, n + 1))
    g.add_edges_from(pairs)
    return nx.number_connected_components(g)


def test_wire_cardinality_exhaustive():
    alphabets = [Alphabet(("tau",)), Alphabet(("tau", "a")), Alphabet(("tau", "a", "b"))]
    with criterion(8, "|A_R| = |A|^k for every R on [m+n], m+n <= 4, |A| in {1,2,3}", 30):
        checked = 0
        for n in range(5):
            pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
            subsets = [frozenset(p for k, p in enumerate(pairs) if bits >> k & 1) for bits in range(1 << len(pairs))]
            classes = np.array([_class_count(n, sub) for sub in subsets])
            for a in alphabets:
                size = len(a.actions)
                grid, masks = _brute_force_masks(n, size, pairs)
                position = {tuple(a.actions[c] for c in row): k for k, row in enumerate(grid)}
                for m in range(n + 1):
                    sort = Sort(m, n - m)
                    rows, cols, counts = [], [], []
                    converted = {}  # id of a returned tuple -> (tuple, its grid columns)
                    for bits, sub in enumerate(subsets):
                        labels = wire_label_set(WireRelation(sort, sub), a)
                        hit = converted.get(id(labels))
                        if hit is None:
                            assert all(lab.sort == sort for lab in labels)
                            hit = converted[id(labels)] = (labels, [position[lab.left + lab.right] for lab in labels])
                        counts.append(len(labels))
                        cols.extend(hit[1])
                        rows.extend([bits] * len(labels))
                    rows, cols, counts = np.array(rows), np.array(cols), np.array(counts)
                    # the engine's labels are distinct, all admissible, and as many as brute force finds
                    assert len(np.unique(rows * len(grid) + cols)) == len(cols)
                    assert masks[rows, cols].all()
                    assert (counts == masks.sum(axis=1)).all()
                    assert (counts == size**classes).all()
                    checked += len(subsets)
        assert checked == 3 * sum((n + 1) << (n * n) for n in range(5))


def test_round_trips(abc):
    with criterion(9, "print/parse round-trip on 500 terms; JSON round-trip is the identity", 30):
        rng = random.Random(99)
        for _ in range(500):
            e = random_term(rng, random_sort(rng), rng.randint(0, 3), abc)
            text = print_expr(e)
            assert parse_expr(text, abc) == alpha_canonical(e)
        for k in range(200):
            t = random_lts(rng) if k % 2 else sem(random_term(rng, random_sort(rng), 2, abc))
            back = json_to_lts(lts_to_json(t))
            assert back == t and back.payload == t.payload
            assert lts_to_json(back) == lts_to_json(t)
