"""Bisectors, pair-coverage bit vectors and distance-equalizer verification.

Unordered vertex pairs {x, y} (x < y by internal index) get dense ids in
row-major order, so "lexicographically first pair" is "lowest id" and a set
of pairs is a Python int used as a bit vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from .errors import ParameterError
from .graph import DistanceMatrix, Graph, Label, mod_label, cycle_distance

VertexSet = frozenset[int]


def n_pairs(order: int) -> int:
    return order * (order - 1) // 2


def pair_id(x: int, y: int, order: int) -> int:
    if x > y:
        x, y = y, x
    if x == y or not 0 <= x < order or not y < order:
        raise ParameterError(f"invalid pair ({x}, {y}) for order {order}")
    return x * order - x * (x + 1) // 2 + (y - x - 1)


def pair_list(order: int) -> list[tuple[int, int]]:
    """All canonical pairs, position = pair id."""
    return [(x, y) for x in range(order) for y in range(x + 1, order)]


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask_from_bools(flags: np.ndarray) -> int:
    return int.from_bytes(np.packbits(flags.astype(np.uint8), bitorder="little").tobytes(), "little")


@dataclass(frozen=True)
class VerificationResult:
    is_equalizer: bool
    uncovered_pair: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.is_equalizer


@dataclass(frozen=True)
class PairCoverage:
    """Per-vertex bit vectors over pair ids.

    ``per_vertex[w]`` marks the pairs {x, y} with x, y != w and
    d(x, w) == d(y, w). ``incident[w]`` marks the pairs having w as an
    endpoint; ``extended[w]`` is their union, which is what a member w of a
    candidate set contributes.
    """

    order: int
    per_vertex: tuple[int, ...]
    incident: tuple[int, ...]

    @property
    def full(self) -> int:
        return (1 << n_pairs(self.order)) - 1

    @cached_property
    def extended(self) -> tuple[int, ...]:
        return tuple(a | b for a, b in zip(self.per_vertex, self.incident))

    @cached_property
    def pairs(self) -> list[tuple[int, int]]:
        return pair_list(self.order)

    def covered_by(self, s: Iterable[int]) -> int:
        acc = 0
        ext = self.extended
        for w in s:
            acc |= ext[w]
        return acc

    def pairs_of(self, mask: int) -> list[tuple[int, int]]:
        pairs = self.pairs
        return [pairs[p] for p in iter_bits(mask)]


def pair_coverage(g: Graph, d: DistanceMatrix) -> PairCoverage:
    n = g.order
    iu, ju = np.triu_indices(n, k=1)
    per_vertex = []
    incident = []
    for w in range(n):
        row = d.entries[w]
        flags = (row[iu] == row[ju]) & (iu != w) & (ju != w)
        per_vertex.append(_mask_from_bools(flags))
        incident.append(_mask_from_bools((iu == w) | (ju == w)))
    return PairCoverage(n, tuple(per_vertex), tuple(incident))


def bisector(g: Graph, d: DistanceMatrix, v: int, w: int) -> VertexSet:
    """All vertices equidistant from ``v`` and ``w``."""
    if v == w:
        raise ParameterError("bisector needs two distinct vertices")
    return frozenset(np.flatnonzero(d.entries[v] == d.entries[w]).tolist())


def equalized_by(g: Graph, d: DistanceMatrix, s: Iterable[int], x: int, y: int) -> VertexSet:
    """Members of ``s`` equidistant from ``x`` and ``y`` (both outside ``s``)."""
    s = frozenset(s)
    if x == y:
        raise ParameterError("equalized_by needs two distinct vertices")
    if x in s or y in s:
        raise ParameterError("x and y must lie outside the set")
    return s & bisector(g, d, x, y)


def is_equalizer_set(g: Graph, d: DistanceMatrix, s: Iterable[int]) -> VerificationResult:
    """Check every pair outside ``s`` against the distance rows of ``s``.

    Works straight from the distance matrix (no coverage bit vectors), so it
    doubles as an independent check on the solver.
    """
    members = sorted(set(s))
    if any(not 0 <= w < g.order for w in members):
        raise ParameterError("set contains a vertex outside the graph")
    outside = np.array([v for v in range(g.order) if v not in set(members)], dtype=np.int64)
    if len(outside) < 2:
        return VerificationResult(True)
    ok = np.zeros((len(outside), len(outside)), dtype=bool)
    for w in members:
        row = d.entries[w, outside]
        ok |= row[:, None] == row[None, :]
    bad = np.argwhere(np.triu(~ok, k=1))
    if len(bad) == 0:
        return VerificationResult(True)
    i, j = bad[0]  # argwhere is row-major, so this is the lexicographically first pair
    return VerificationResult(False, (int(outside[i]), int(outside[j])))


# --------------------------------------------------------------------------
# prism C_n□K_2 helpers: labels are (x, y) with x in 1..n, y in 1..2


def prism_sides(n: int) -> tuple[list[Label], list[Label]]:
    """(A, B) where B holds the vertices with odd coordinate sum."""
    a = [(x, y) for x in range(1, n + 1) for y in (1, 2) if (x + y) % 2 == 0]
    b = [(x, y) for x in range(1, n + 1) for y in (1, 2) if (x + y) % 2 == 1]
    return a, b


def prism_pair_family(n: int) -> list[tuple[Label, Label]]:
    """Pairs of A at cycle distance exactly 3, oriented as (v, w) with x_w = <x_v + 3>_n.

    One entry per v in A. For n >= 10 every unordered pair appears once; for
    n = 6 each unordered pair appears in both orientations.
    """
    a, _ = prism_sides(n)
    out = []
    for v in a:
        w = (mod_label(v[0] + 3, n), 3 - v[1])
        if cycle_distance(v[0], w[0], n) == 3:
            out.append((v, w))
    return out


def prism_shift(v: Label, w: Label, l: int, n: int) -> tuple[Label, Label]:
    """Move ``v`` back and ``w`` forward by 2l along the cycle."""
    return (mod_label(v[0] - 2 * l, n), v[1]), (mod_label(w[0] + 2 * l, n), w[1])


def prism_rotate(v: Label, k: int, n: int) -> Label:
    return (mod_label(v[0] + k, n), v[1])


def prism_swap(v: Label) -> Label:
    return (v[0], 3 - v[1])
