"""Exact equidistant dimension with optimality certificates.

A vertex set S *satisfies* a pair {x, y} when x or y is in S, or some w in S
has d(x, w) == d(y, w). S is a distance-equalizer set iff it satisfies every
pair, i.e. iff the OR of the extended coverage vectors of its members is all
ones. Finding xi(G) is therefore a minimum set-cover over pair ids, solved
here by iterative deepening on the cardinality with branch-and-bound.

Bipartite graphs get a much smaller search: every equalizer set contains a
whole colour class, so it suffices to seed each class and look for the
cheapest augmentation.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable

from .equalizer import PairCoverage, is_equalizer_set, iter_bits, pair_coverage
from .errors import ParameterError, SolverTimeout, StrategyError
from .graph import DistanceMatrix, Graph, all_pairs_distances, bipartition

STRATEGIES = ("auto", "subset_enumeration", "bipartite_seeded")
_ALIASES = {"enum": "subset_enumeration", "seeded": "bipartite_seeded"}

DEFAULT_BUDGET = 60.0


@dataclass(frozen=True)
class Bounds:
    lower: int
    upper: int
    lower_reason: str = "trivial"
    upper_witness: frozenset[int] = frozenset()


@dataclass(frozen=True)
class Solution:
    xi: int
    basis: frozenset[int]
    strategy: str
    nodes: int
    seconds: float
    # how optimality was certified: "exhausted" (cardinality xi-1 searched
    # out) or "lower_bound" (xi equals a proven lower bound)
    certificate: str = "exhausted"

    def sorted_basis(self) -> list[int]:
        return sorted(self.basis)


@dataclass
class _Stats:
    nodes: int = 0
    deadline: float = float("inf")

    def tick(self) -> None:
        self.nodes += 1
        if (self.nodes & 0xFF == 1) and time.monotonic() > self.deadline:
            raise _OutOfTime


class _OutOfTime(Exception):
    pass


def normalize_strategy(strategy: str) -> str:
    strategy = _ALIASES.get(strategy, strategy)
    if strategy not in STRATEGIES:
        raise ParameterError(f"unknown strategy {strategy!r}")
    return strategy


# --------------------------------------------------------------------------
# bounds


def lower_bound(g: Graph, d: DistanceMatrix | None = None) -> tuple[int, str]:
    """min(|A|, |B|) for bipartite graphs, else 1. Returns (value, reason)."""
    bp = bipartition(g)
    if bp.exists:
        return min(len(bp.side_a), len(bp.side_b)), "bipartite_partite_set"
    return 1, "trivial"


def _greedy(cov: PairCoverage, forced: Iterable[int] = ()) -> list[int]:
    chosen = sorted(set(forced))
    uncovered = cov.full & ~cov.covered_by(chosen)
    ext = cov.extended
    taken = set(chosen)
    while uncovered:
        best, best_gain = -1, 0
        for w in range(cov.order):
            if w in taken:
                continue
            gain = (ext[w] & uncovered).bit_count()
            if gain > best_gain:
                best, best_gain = w, gain
        chosen.append(best)
        taken.add(best)
        uncovered &= ~ext[best]
    return chosen


def greedy_upper_bound(
    g: Graph, d: DistanceMatrix, coverage: PairCoverage | None = None
) -> tuple[int, frozenset[int]]:
    """Greedy max-coverage equalizer set; ties go to the smallest index."""
    cov = coverage or pair_coverage(g, d)
    witness = frozenset(_greedy(cov))
    return len(witness), witness


def compute_bounds(g: Graph, d: DistanceMatrix, coverage: PairCoverage | None = None) -> Bounds:
    lo, reason = lower_bound(g, d)
    hi, witness = greedy_upper_bound(g, d, coverage)
    return Bounds(min(lo, hi), hi, reason, witness)


# --------------------------------------------------------------------------
# search core


class _CoverSearch:
    """Minimum-cardinality augmentation over a fixed coverage table.

    Vertices are renumbered into *slots* by descending extended-coverage
    popcount (ties by index) so that walking the set bits of a slot mask
    visits candidates in search order.
    """

    def __init__(self, cov: PairCoverage, stats: _Stats) -> None:
        self.cov = cov
        self.stats = stats
        ext = cov.extended
        self.order = sorted(range(cov.order), key=lambda w: (-ext[w].bit_count(), w))
        self.slot_mask = [ext[w] for w in self.order]
        coverers = [0] * (cov.order * (cov.order - 1) // 2)
        for slot, mask in enumerate(self.slot_mask):
            bit = 1 << slot
            for p in iter_bits(mask):
                coverers[p] |= bit
        self.coverers = coverers

    def minimum(self, uncovered: int, allowed: Iterable[int], k_lo: int, k_hi: int) -> list[int] | None:
        """Smallest T within ``allowed`` (vertex ids) covering ``uncovered``, |T| in [k_lo, k_hi].

        Every cardinality below the returned size (down to ``k_lo``) has been
        searched exhaustively. Returns None when nothing of size <= k_hi works.
        """
        slot_of = {w: s for s, w in enumerate(self.order)}
        allowed_slots = 0
        for w in allowed:
            allowed_slots |= 1 << slot_of[w]
        for k in range(max(k_lo, 0), k_hi + 1):
            self.k_current = k
            found = self._dfs(uncovered, allowed_slots, k)
            if found is not None:
                return sorted(self.order[s] for s in found)
        return None

    def _dfs(self, uncovered: int, allowed: int, k: int) -> list[int] | None:
        self.stats.tick()
        if not uncovered:
            return []
        if k == 0:
            return None
        masks = self.slot_mask
        if k == 1:
            for s in iter_bits(allowed):
                if not uncovered & ~masks[s]:
                    return [s]
            return None
        need = uncovered.bit_count()
        gains = sorted(((masks[s] & uncovered).bit_count() for s in iter_bits(allowed)), reverse=True)
        if sum(gains[:k]) < need:
            return None
        # branch on the uncovered pair with the fewest remaining coverers
        coverers = self.coverers
        best_branch, best_count = 0, None
        for p in iter_bits(uncovered):
            c = coverers[p] & allowed
            cnt = c.bit_count()
            if best_count is None or cnt < best_count:
                best_branch, best_count = c, cnt
                if cnt <= 1:
                    break
        if not best_branch:
            return None
        rest = allowed
        for s in iter_bits(best_branch):
            rest &= ~(1 << s)
            sub = self._dfs(uncovered & ~masks[s], rest, k - 1)
            if sub is not None:
                return [s] + sub
        return None


# --------------------------------------------------------------------------
# public entry points


def _deadline(budget: float | None) -> float:
    if budget is None:
        return float("inf")
    if budget <= 0:
        raise ParameterError("budget must be positive")
    return time.monotonic() + budget


def solve_with_forced(
    g: Graph,
    d: DistanceMatrix | None = None,
    forced: Iterable[int] = (),
    budget: float | None = DEFAULT_BUDGET,
    coverage: PairCoverage | None = None,
) -> Solution:
    """Minimum equalizer set containing ``forced``."""
    d = d if d is not None else all_pairs_distances(g)
    forced = frozenset(forced)
    if any(not 0 <= v < g.order for v in forced):
        raise ParameterError("forced set contains a vertex outside the graph")
    cov = coverage or pair_coverage(g, d)
    stats = _Stats(deadline=_deadline(budget))
    start = time.monotonic()
    k_lo = 0
    if not forced:
        k_lo, _ = lower_bound(g, d)
    greedy = _greedy(cov, forced)
    uncovered = cov.full & ~cov.covered_by(forced)
    allowed = [v for v in range(g.order) if v not in forced]
    search = _CoverSearch(cov, stats)
    try:
        extra = search.minimum(uncovered, allowed, k_lo, len(greedy) - len(forced))
    except _OutOfTime:
        lower = len(forced) + getattr(search, "k_current", k_lo)
        raise SolverTimeout(
            "budget exhausted",
            Bounds(lower, len(greedy), "exhausted", frozenset(greedy)),
        ) from None
    assert extra is not None, "greedy augmentation guarantees feasibility"
    basis = forced | frozenset(extra)
    cert = "lower_bound" if len(extra) == k_lo and k_lo > 0 else "exhausted"
    return Solution(len(basis), basis, "forced", stats.nodes, time.monotonic() - start, cert)


def solve_exact(
    g: Graph,
    d: DistanceMatrix | None = None,
    strategy: str = "auto",
    budget: float | None = DEFAULT_BUDGET,
    coverage: PairCoverage | None = None,
) -> Solution:
    """Compute xi(G) and one distance-equalizer basis.

    Raises :class:`SolverTimeout` (carrying the best known :class:`Bounds`)
    when ``budget`` seconds run out, and :class:`StrategyError` when
    ``bipartite_seeded`` is requested for a non-bipartite graph.
    """
    g.require_connected()
    d = d if d is not None else all_pairs_distances(g)
    strategy = normalize_strategy(strategy)
    bp = bipartition(g)
    if strategy == "auto":
        strategy = "bipartite_seeded" if bp.exists else "subset_enumeration"
    if strategy == "bipartite_seeded" and not bp.exists:
        raise StrategyError("bipartite_seeded needs a bipartite graph")
    cov = coverage or pair_coverage(g, d)
    stats = _Stats(deadline=_deadline(budget))
    start = time.monotonic()
    if strategy == "subset_enumeration":
        basis, cert = _enumerate(g, d, cov, stats)
    else:
        basis, cert = _seeded(g, cov, stats, bp.sides())
    return Solution(len(basis), frozenset(basis), strategy, stats.nodes, time.monotonic() - start, cert)


def _enumerate(g: Graph, d: DistanceMatrix, cov: PairCoverage, stats: _Stats) -> tuple[list[int], str]:
    lo, reason = lower_bound(g, d)
    greedy = _greedy(cov)
    search = _CoverSearch(cov, stats)
    try:
        basis = search.minimum(cov.full, range(g.order), lo, len(greedy))
    except _OutOfTime:
        raise SolverTimeout(
            "budget exhausted",
            Bounds(getattr(search, "k_current", lo), len(greedy), reason, frozenset(greedy)),
        ) from None
    assert basis is not None
    cert = "lower_bound" if len(basis) == lo and lo > 1 else "exhausted"
    return basis, cert


def _seeded(g: Graph, cov: PairCoverage, stats: _Stats, sides) -> tuple[list[int], str]:
    search = _CoverSearch(cov, stats)
    lower = min(len(s) for s in sides)
    best: list[int] | None = None
    # the greedy completion of either side is a valid starting upper bound
    upper = min(len(_greedy(cov, side)) for side in sides)
    for side in sides:
        allowed = [v for v in range(g.order) if v not in side]
        uncovered = cov.full & ~cov.covered_by(side)
        limit = (len(best) if best is not None else upper) - len(side)
        if limit < 0:
            continue
        try:
            extra = search.minimum(uncovered, allowed, 0, limit)
        except _OutOfTime:
            witness = best if best is not None else min((_greedy(cov, s) for s in sides), key=len)
            raise SolverTimeout(
                "budget exhausted",
                Bounds(lower, len(witness), "bipartite_partite_set", frozenset(witness)),
            ) from None
        if extra is None:
            continue
        cand = sorted(side | frozenset(extra))
        if best is None or (len(cand), cand) < (len(best), best):
            best = cand
    assert best is not None
    cert = "lower_bound" if len(best) == lower else "exhausted"
    return best, cert


def verify_solution(g: Graph, d: DistanceMatrix, sol: Solution) -> bool:
    return is_equalizer_set(g, d, sol.basis).is_equalizer
