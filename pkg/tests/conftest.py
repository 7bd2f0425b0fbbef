import itertools
import random

import networkx as nx
import pytest

from equidim.graph import Graph


def nx_distances(g: Graph):
    """Distances from networkx, independent of the package's BFS."""
    h = nx.Graph()
    h.add_nodes_from(range(g.order))
    h.add_edges_from(g.edges())
    return dict(nx.all_pairs_shortest_path_length(h))


def naive_is_equalizer(dist, order, s):
    s = set(s)
    outside = [v for v in range(order) if v not in s]
    return all(any(dist[x][w] == dist[y][w] for w in s) for x, y in itertools.combinations(outside, 2))


def equalizer_masks(dist, order):
    """For each pair outside-candidates, the bitmask of vertices equalizing it."""
    masks = {}
    for x, y in itertools.combinations(range(order), 2):
        m = 0
        for w in range(order):
            if dist[x][w] == dist[y][w]:
                m |= 1 << w
        masks[(x, y)] = m
    return masks


def exists_equalizer_of_size(dist, order, k):
    """Brute force over all k-subsets.

    Supersets of equalizer sets are equalizer sets, so this also settles
    every smaller size.
    """
    if k >= order:
        return True
    if k < 0:
        return False
    masks = equalizer_masks(dist, order)
    pairs = list(masks.items())
    for subset in itertools.combinations(range(order), k):
        sm = 0
        for v in subset:
            sm |= 1 << v
        if all((x in subset) or (y in subset) or (m & sm) for (x, y), m in pairs):
            return True
    return False


def brute_xi(g: Graph) -> int:
    dist = nx_distances(g)
    for k in range(0, g.order + 1):
        if exists_equalizer_of_size(dist, g.order, k):
            return k
    raise AssertionError("unreachable")


def random_connected_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = set()
    for v in range(1, n):
        edges.add((rng.randrange(v), v))
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            edges.add((u, v))
    perm = list(range(n))
    rng.shuffle(perm)
    return Graph.from_edges(n, {tuple(sorted((perm[u], perm[v]))) for u, v in edges})


def random_bipartite_graph(rng: random.Random, n: int, p: float) -> Graph:
    color = [rng.randrange(2) for _ in range(n)]
    color[0], color[1] = 0, 1
    edges = set()
    for v in range(1, n):
        opposite = [u for u in range(v) if color[u] != color[v]]
        if not opposite:
            color[v] ^= 1
            opposite = [u for u in range(v) if color[u] != color[v]]
        edges.add((rng.choice(opposite), v))
    for u, v in itertools.combinations(range(n), 2):
        if color[u] != color[v] and rng.random() < p:
            edges.add((u, v))
    return Graph.from_edges(n, edges)


# --------------------------------------------------------------------------
# one summary line per acceptance criterion

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.criterion if hasattr(report, "criterion") else None
    if marker:
        _ACCEPTANCE[marker[0]] = (marker[1], report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m:
        report.criterion = (str(m.args[0]), m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE, key=int):
        title, outcome = _ACCEPTANCE[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")
