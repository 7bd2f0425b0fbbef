"""Graphs, family generators, Cartesian products, BFS distances and bipartitions.

Vertices carry 1-based coordinate labels (tuples of ints) so that witness
sets can be written in the same coordinates as the formulas that define
them. Internally every vertex is a 0-based index; :class:`Graph` keeps the
label <-> index map.
"""

from __future__ import annotations

import ast
import itertools
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ConnectivityError, GraphFormatError, ParameterError

Label = tuple[int, ...]


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph with labelled vertices.

    ``adjacency[i]`` is the frozenset of neighbours of vertex ``i``.
    Construction validates simplicity and symmetry; connectivity is checked
    separately by :meth:`require_connected` (generators always produce
    connected graphs, loaders call it explicitly).
    """

    labels: tuple[Label, ...]
    adjacency: tuple[frozenset[int], ...]
    family_tag: str | None = None
    _index: dict[Label, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.adjacency):
            raise GraphFormatError("labels and adjacency have different lengths")
        index = {}
        for i, lab in enumerate(self.labels):
            if lab in index:
                raise GraphFormatError(f"duplicate vertex label {lab}")
            index[lab] = i
        n = len(self.labels)
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                if not 0 <= j < n:
                    raise GraphFormatError(f"edge endpoint {j} out of range")
                if j == i:
                    raise GraphFormatError(f"self-loop at vertex {i}")
                if i not in self.adjacency[j]:
                    raise GraphFormatError(f"asymmetric edge {i}-{j}")
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_edges(
        cls,
        order: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[Label] | None = None,
        family_tag: str | None = None,
    ) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(order)]
        for i, j in edges:
            if i == j:
                raise GraphFormatError(f"self-loop at vertex {i}")
            if not (0 <= i < order and 0 <= j < order):
                raise GraphFormatError(f"edge {i}-{j} out of range for order {order}")
            if j in nbrs[i]:
                raise GraphFormatError(f"multi-edge {i}-{j}")
            nbrs[i].add(j)
            nbrs[j].add(i)
        if labels is None:
            labels = [(i + 1,) for i in range(order)]
        return cls(tuple(tuple(lab) for lab in labels), tuple(frozenset(s) for s in nbrs), family_tag)

    @property
    def order(self) -> int:
        return len(self.labels)

    @property
    def size(self) -> int:
        return sum(len(s) for s in self.adjacency) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for i, nbrs in enumerate(self.adjacency):
            for j in sorted(nbrs):
                if i < j:
                    yield i, j

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adjacency[i]

    def index(self, label: Sequence[int] | int) -> int:
        """Internal index of a vertex given its label (an int means a 1-tuple)."""
        key = (label,) if isinstance(label, int) else tuple(label)
        try:
            return self._index[key]
        except KeyError:
            raise ParameterError(f"no vertex labelled {format_label(key)}") from None

    def indices(self, labels: Iterable[Sequence[int] | int]) -> frozenset[int]:
        return frozenset(self.index(lab) for lab in labels)

    def label(self, i: int) -> Label:
        return self.labels[i]

    def labels_of(self, vertices: Iterable[int]) -> list[Label]:
        return [self.labels[i] for i in sorted(vertices)]

    def is_connected(self) -> bool:
        if self.order == 0:
            return False
        return len(_bfs_levels(self.adjacency, 0)) == self.order

    def require_connected(self) -> "Graph":
        if not self.is_connected():
            raise ConnectivityError("graph is not connected")
        return self


def format_label(label: Label) -> str:
    if len(label) == 1:
        return str(label[0])
    return "(" + ",".join(str(c) for c in label) + ")"


def _bfs_levels(adjacency: Sequence[frozenset[int]], source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in adjacency[u]:
            if v not in dist:
                dist[v] = du
                queue.append(v)
    return dist


# --------------------------------------------------------------------------
# generators

FAMILIES = ("path", "cycle", "complete", "hypercube")


def path(n: int) -> Graph:
    if n < 1:
        raise ParameterError("path requires n >= 1")
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)), family_tag=f"path {n}")


def cycle(n: int) -> Graph:
    if n < 3:
        raise ParameterError("cycle requires n >= 3")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)), family_tag=f"cycle {n}")


def complete(n: int) -> Graph:
    if n < 1:
        raise ParameterError("complete requires n >= 1")
    return Graph.from_edges(n, itertools.combinations(range(n), 2), family_tag=f"complete {n}")


def hypercube(n: int) -> Graph:
    """Q_n on n-bit strings; label bit 1 is the most significant bit of the index."""
    if n < 1:
        raise ParameterError("hypercube requires n >= 1")
    order = 1 << n
    labels = [tuple((v >> (n - 1 - b)) & 1 for b in range(n)) for v in range(order)]
    edges = ((v, v ^ (1 << b)) for v in range(order) for b in range(n) if v < v ^ (1 << b))
    return Graph.from_edges(order, edges, labels, family_tag=f"hypercube {n}")


def generate(family: str, params: Sequence[int]) -> Graph:
    """Build a standard graph from ``family`` in :data:`FAMILIES`."""
    builders = {"path": path, "cycle": cycle, "complete": complete, "hypercube": hypercube}
    if family not in builders:
        raise ParameterError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if len(params) != 1:
        raise ParameterError(f"{family} takes exactly one parameter, got {len(params)}")
    return builders[family](int(params[0]))


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """G□H with labels ``label_g + label_h``, ordered row-major in G."""
    m = h.order
    labels = [lg + lh for lg in g.labels for lh in h.labels]
    edges = []
    for a in range(g.order):
        for b, c in h.edges():
            edges.append((a * m + b, a * m + c))
    for a, b in g.edges():
        for c in range(m):
            edges.append((a * m + c, b * m + c))
    tag = None
    if g.family_tag and h.family_tag:
        tag = f"{g.family_tag} x {h.family_tag}"
    return Graph.from_edges(g.order * m, edges, labels, family_tag=tag)


def hamming2(n: int, m: int) -> Graph:
    """K_n□K_m."""
    g = cartesian_product(complete(n), complete(m))
    return _retag(g, f"hamming {n} {m}")


def prism(n: int) -> Graph:
    """C_n□K_2."""
    return _retag(cartesian_product(cycle(n), complete(2)), f"prism {n}")


def grid(k: int, n: int) -> Graph:
    """P_k□P_n."""
    return _retag(cartesian_product(path(k), path(n)), f"grid {k} {n}")


def _retag(g: Graph, tag: str) -> Graph:
    return Graph(g.labels, g.adjacency, tag)


def cycle_distance(a: int, b: int, n: int) -> int:
    """Distance between labels ``a`` and ``b`` on C_n."""
    diff = abs(a - b) % n
    return min(diff, n - diff)


def mod_label(k: int, n: int) -> int:
    """Reduce ``k`` into the 1-based label range {1, ..., n} (residue 0 maps to n)."""
    r = k % n
    return n if r == 0 else r


# --------------------------------------------------------------------------
# distances


class DistanceMatrix:
    """All-pairs hop distances, read-only."""

    def __init__(self, entries: np.ndarray) -> None:
        entries = np.array(entries, dtype=np.int32, copy=True)
        entries.setflags(write=False)
        self.entries = entries

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def __call__(self, u: int, v: int) -> int:
        return int(self.entries[u, v])

    def __getitem__(self, key):
        return self.entries[key]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DistanceMatrix) and np.array_equal(self.entries, other.entries)

    def __repr__(self) -> str:
        return f"DistanceMatrix(order={self.order})"


def _bfs_row(adjacency: Sequence[frozenset[int]], source: int, order: int) -> np.ndarray:
    row = np.full(order, -1, dtype=np.int32)
    for v, dv in _bfs_levels(adjacency, source).items():
        row[v] = dv
    return row


def all_pairs_distances(g: Graph, workers: int = 1) -> DistanceMatrix:
    """BFS from every vertex. ``workers > 1`` runs sources on a thread pool."""
    if not g.is_connected():
        raise ConnectivityError("distances requested for a disconnected graph")
    n = g.order
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda s: _bfs_row(g.adjacency, s, n), range(n)))
    else:
        rows = [_bfs_row(g.adjacency, s, n) for s in range(n)]
    return DistanceMatrix(np.vstack(rows))


# --------------------------------------------------------------------------
# bipartition


@dataclass(frozen=True)
class Bipartition:
    exists: bool
    side_a: frozenset[int] = frozenset()
    side_b: frozenset[int] = frozenset()

    def sides(self) -> tuple[frozenset[int], frozenset[int]]:
        return self.side_a, self.side_b


def bipartition(g: Graph) -> Bipartition:
    """Two-colour ``g`` by BFS parity from vertex 0.

    ``side_a`` is the smaller colour class; on a tie it is the class
    containing vertex 0.
    """
    g.require_connected()
    parity = {v: d & 1 for v, d in _bfs_levels(g.adjacency, 0).items()}
    for u, v in g.edges():
        if parity[u] == parity[v]:
            return Bipartition(False)
    even = frozenset(v for v, p in parity.items() if p == 0)
    odd = frozenset(v for v, p in parity.items() if p == 1)
    if len(odd) < len(even):
        return Bipartition(True, odd, even)
    return Bipartition(True, even, odd)


# --------------------------------------------------------------------------
# text file format


def dumps_graph(g: Graph) -> str:
    lines = [f"{g.order} {g.size}"]
    if g.family_tag:
        lines.append(f"# family {g.family_tag}")
    for i, lab in enumerate(g.labels):
        lines.append(f"# label {i} ({','.join(str(c) for c in lab)})")
    lines.extend(f"{i} {j}" for i, j in g.edges())
    return "\n".join(lines) + "\n"


def loads_graph(text: str) -> Graph:
    """Parse the ``v e`` / ``i j`` edge-list format; validates connectivity."""
    header = None
    edges: list[tuple[int, int]] = []
    labels: dict[int, Label] = {}
    tag = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].split(None, 2)
            if len(body) == 3 and body[0] == "label":
                labels[_parse_int(body[1], lineno)] = _parse_label(body[2], lineno)
            elif len(body) >= 2 and body[0] == "family":
                tag = line[1:].strip()[len("family"):].strip()
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected two integers, got {line!r}")
        a, b = _parse_int(parts[0], lineno), _parse_int(parts[1], lineno)
        if header is None:
            header = (a, b)
        else:
            edges.append((a, b))
    if header is None:
        raise GraphFormatError("empty graph file")
    order, n_edges = header
    if order < 1:
        raise GraphFormatError("graph must have at least one vertex")
    if len(edges) != n_edges:
        raise GraphFormatError(f"header announces {n_edges} edges, found {len(edges)}")
    label_list = None
    if labels:
        if sorted(labels) != list(range(order)):
            raise GraphFormatError("label comments must cover every vertex exactly once")
        label_list = [labels[i] for i in range(order)]
    g = Graph.from_edges(order, edges, label_list, family_tag=tag)
    if not g.is_connected():
        raise ConnectivityError("graph file describes a disconnected graph")
    return g


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"line {lineno}: {token!r} is not an integer") from None


def _parse_label(token: str, lineno: int) -> Label:
    try:
        value = ast.literal_eval(token.strip())
    except (ValueError, SyntaxError):
        raise GraphFormatError(f"line {lineno}: bad label {token!r}") from None
    if isinstance(value, int):
        return (value,)
    if isinstance(value, tuple) and all(isinstance(c, int) for c in value):
        return value
    raise GraphFormatError(f"line {lineno}: bad label {token!r}")


def parse_label(text: str, g: Graph | None = None) -> Label:
    """Parse a CLI label such as ``3``, ``(1,2)``, ``1,2`` or ``0110``.

    A bare digit string is read as an integer label unless ``g`` has no such
    vertex and the string is a bit string, in which case it names a
    hypercube vertex.
    """
    s = text.strip()
    if s.startswith("("):
        return _parse_label(s, 0)
    if "," in s:
        try:
            return tuple(int(c) for c in s.split(",") if c.strip())
        except ValueError:
            raise ParameterError(f"cannot parse vertex label {text!r}") from None
    bits = tuple(int(c) for c in s) if s and set(s) <= {"0", "1"} else None
    try:
        as_int = (int(s),)
    except ValueError:
        as_int = None
    if g is not None and bits is not None and as_int not in g._index:
        return bits
    if as_int is not None:
        return as_int
    if bits is not None:
        return bits
    raise ParameterError(f"cannot parse vertex label {text!r}")
