"""Exit criteria for the package, one test per criterion.

Run ``pytest tests/test_acceptance.py -rA`` to see the per-criterion summary.
"""

import itertools
import random
import time

import pytest

from conftest import exists_equalizer_of_size, nx_distances, random_bipartite_graph, random_connected_graph
from equidim.constructions import construct_witness
from equidim.equalizer import (
    bisector,
    equalized_by,
    is_equalizer_set,
    prism_pair_family,
    prism_shift,
    prism_sides,
)
from equidim.graph import all_pairs_distances, bipartition, cycle_distance, grid, hamming2, hypercube, prism
from equidim.records import compute_grid_table, parse_table_rows
from equidim.solver import solve_exact

# Rows k = 2..6, columns n = 2..6 of the published grid table,
# q = xi(P_k□P_n) - ceil(k*n/2).
PUBLISHED_GRID_TABLE = parse_table_rows(
    [
        "2 & 0 & 0 & 1 & 1 & 1",
        "3 & 0 & 0 & 0 & 0 & 0",
        "4 & 1 & 0 & 0 & 0 & 1",
        "5 & 1 & 0 & 0 & 0 & 0",
        "6 & 1 & 0 & 1 & 0 & 0",
    ]
)

# every bipartite instance solved in this module, for criterion 8
_bipartite_seen: list[tuple[str, int, int]] = []


def _solve(g, strategy="auto", budget=600):
    d = all_pairs_distances(g)
    sol = solve_exact(g, d, strategy=strategy, budget=budget)
    assert is_equalizer_set(g, d, sol.basis), "returned basis does not verify"
    bp = bipartition(g)
    if bp.exists:
        _bipartite_seen.append((g.family_tag or "random", sol.xi, min(len(bp.side_a), len(bp.side_b))))
    return sol


@pytest.mark.criterion(1, "Hamming sweep 2<=n<=m<=6 matches closed form, each < 5 s")
def test_hamming_sweep():
    count = 0
    for n in range(2, 7):
        for m in range(n, 7):
            expected = m if n == 2 else min(m, n, 5)
            start = time.monotonic()
            sol = _solve(hamming2(n, m), budget=5)
            elapsed = time.monotonic() - start
            assert sol.xi == expected, (n, m, sol.xi)
            assert elapsed < 5, (n, m, elapsed)
            count += 1
    assert count == 15


@pytest.mark.criterion(2, "Hypercubes: Q2=2, Q3=4, Q4 in [8,9] with verified 9-set witness, < 30 s")
def test_hypercubes():
    start = time.monotonic()
    assert _solve(hypercube(2)).xi == 2
    assert _solve(hypercube(3)).xi == 4
    q4 = _solve(hypercube(4), strategy="bipartite_seeded")
    assert 8 <= q4.xi <= 9
    g = hypercube(4)
    w = construct_witness("hypercube", (4,))
    assert len(w) == 9
    assert is_equalizer_set(g, all_pairs_distances(g), g.indices(w.vertices))
    assert time.monotonic() - start < 30
    print(f"derived: xi(Q_4) = {q4.xi}")


@pytest.mark.criterion(3, "Prisms C_n x K_2, n=3..12, match closed form, each < 30 s")
def test_prisms():
    for n in range(3, 13):
        expected = (5 * n - 2) // 4 if n % 4 == 2 else n
        start = time.monotonic()
        sol = _solve(prism(n), budget=30)
        assert sol.xi == expected, (n, sol.xi)
        assert time.monotonic() - start < 30


@pytest.mark.criterion(4, "Square grids n=2..5 solve to ceil(n^2/2); B_n verifies up to n=12; < 60 s")
def test_square_grids():
    start = time.monotonic()
    for n in range(2, 6):
        assert _solve(grid(n, n)).xi == (n * n + 1) // 2, n
    for n in range(2, 13):
        g = grid(n, n)
        b_n = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if (i - j) % 2 == 0]
        assert len(b_n) == (n * n + 1) // 2
        assert is_equalizer_set(g, all_pairs_distances(g), g.indices(b_n)), n
    assert time.monotonic() - start < 60


@pytest.mark.criterion(5, "Grid table q(k,n), 2<=k,n<=6, matches the 25 published cells, < 10 min")
def test_grid_table():
    start = time.monotonic()
    table = compute_grid_table(6, 6, budget_per_cell=120, strategy="bipartite_seeded")
    assert time.monotonic() - start < 600
    for (k, n), cell in table.cells.items():
        assert cell.status == "solved", (k, n)
        _bipartite_seen.append((f"grid {k} {n}", cell.xi, (k * n) // 2))
    assert (table.q(2, 4), table.q(3, 4), table.q(2, 6), table.q(5, 5), table.q(4, 6)) == (1, 0, 1, 0, 1)
    mismatches = {
        (k, n): (table.q(k, n), PUBLISHED_GRID_TABLE[(k, n)])
        for (k, n) in sorted(PUBLISHED_GRID_TABLE)
        if table.q(k, n) != PUBLISHED_GRID_TABLE[(k, n)]
    }
    assert not mismatches, f"computed vs published q: {mismatches}"


def _lemma_counterexamples():
    """Exhaustive checks of the prism lemmas; returns a list of failures."""
    bad = []
    cache = {}

    def ctx(n):
        if n not in cache:
            g = prism(n)
            a, b = prism_sides(n)
            cache[n] = (g, all_pairs_distances(g), a, g.indices(a), g.indices(b))
        return cache[n]

    def bis(n, v, w):
        g, d, *_ = ctx(n)
        return bisector(g, d, g.index(v), g.index(w))

    for n in (4, 6, 8, 10, 12):
        g, d, a, _, b_idx = ctx(n)
        for v, w in itertools.combinations(a, 2):
            if cycle_distance(v[0], w[0], n) % 2 == 0 and not equalized_by(g, d, b_idx, g.index(v), g.index(w)):
                bad.append(("even distance", n, v, w))
    for n in (6, 8, 10, 12, 14):
        g, d, a, _, b_idx = ctx(n)
        for v, w in itertools.combinations(a, 2):
            if cycle_distance(v[0], w[0], n) % 4 == 1 and not equalized_by(g, d, b_idx, g.index(v), g.index(w)):
                bad.append(("distance 1 mod 4", n, v, w))
    for n in (6, 10, 14, 18):
        g, d, a, a_idx, _ = ctx(n)
        for v, w in itertools.combinations(a, 2):
            if cycle_distance(v[0], w[0], n) % 4 == 3 and not bis(n, v, w) <= a_idx:
                bad.append(("distance 3 mod 4", n, v, w))
    for n in (6, 10, 14):
        for v, w in prism_pair_family(n):
            for l in range(n // 4):
                vt, wt = prism_shift(v, w, l, n)
                if bis(n, vt, wt) != bis(n, v, w):
                    bad.append(("shift", n, v, w, l))
    for n in (6, 10, 14, 18):
        g, d, a, _, _ = ctx(n)
        hits = {g.index(s): 0 for s in a}
        for v, w in prism_pair_family(n):
            for s in bis(n, v, w):
                hits[s] += 1
        bad.extend(("four pairs", n, g.label(s), c) for s, c in hits.items() if c != 4)
    for n in (6, 10, 14, 18):
        g, d, *_ = ctx(n)
        s_star = {g.index((2 * i - 1, 1)) for i in range(1, (n - 2) // 4 + 1)}
        skip = {frozenset({(n // 2 - 2, 1), (n // 2 + 1, 2)}), frozenset({(n - 2, 2), (1, 1)})}
        for v, w in prism_pair_family(n):
            if frozenset({v, w}) in skip:
                continue
            if not any(d(g.index(v), s) == d(g.index(w), s) for s in s_star):
                bad.append(("S* equalizes", n, v, w))
    return bad


@pytest.mark.criterion(6, "Prism lemma suites hold exhaustively (zero counterexamples)")
def test_lemma_suites():
    assert _lemma_counterexamples() == []


@pytest.mark.criterion(7, "Oracle equivalence on 50 random bipartite and 50 random connected graphs")
def test_oracle_equivalence():
    rng = random.Random(7)
    for _ in range(50):
        g = random_bipartite_graph(rng, rng.randint(2, 14), rng.uniform(0.05, 0.5))
        a = _solve(g, strategy="subset_enumeration")
        b = _solve(g, strategy="bipartite_seeded")
        assert a.xi == b.xi
    for _ in range(50):
        n = rng.randint(2, 12)
        g = random_connected_graph(rng, n, rng.uniform(0.0, 0.6))
        sol = _solve(g)
        assert not exists_equalizer_of_size(nx_distances(g), n, sol.xi - 1)


@pytest.mark.criterion(8, "Bipartite lower bound xi >= min(|A|,|B|) on every bipartite instance")
def test_bipartite_lower_bound():
    rng = random.Random(8)
    instances = [hypercube(n) for n in (2, 3, 4)] + [prism(n) for n in (4, 6, 8, 10, 12)]
    instances += [grid(k, n) for k in range(2, 7) for n in range(k, 7)]
    instances += [random_bipartite_graph(rng, rng.randint(2, 14), 0.3) for _ in range(30)]
    for g in instances:
        _solve(g)
    assert _bipartite_seen
    for name, xi, lower in _bipartite_seen:
        assert xi >= lower, (name, xi, lower)
