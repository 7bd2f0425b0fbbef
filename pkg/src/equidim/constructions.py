"""Closed-form equidistant dimensions and explicit witness sets.

Families and parameters:

* ``hamming2 (n, m)``   K_n□K_m, n, m >= 2
* ``hypercube (n,)``    Q_n, n >= 2
* ``prism_cycle (n,)``  C_n□K_2, n >= 3
* ``grid_square (n,)``  P_n□P_n, n >= 2

Every witness is written in 1-based coordinates and verified against the
distance matrix of the generated graph by :func:`verify_theorem`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .equalizer import is_equalizer_set
from .errors import ParameterError, SolverTimeout
from .graph import Graph, Label, all_pairs_distances, grid, hamming2, hypercube, prism
from .solver import DEFAULT_BUDGET, Bounds, solve_exact

CLOSED_FORM_FAMILIES = ("hamming2", "hypercube", "prism_cycle", "grid_square")


@dataclass(frozen=True)
class ClosedFormResult:
    family: str
    params: tuple[int, ...]
    lower: int
    upper: int
    value: int | None = None
    witness_available: bool = True


@dataclass(frozen=True)
class WitnessSet:
    family: str
    params: tuple[int, ...]
    vertices: tuple[Label, ...]
    theorem_tag: str

    def __len__(self) -> int:
        return len(self.vertices)


def _check_params(family: str, params: Sequence[int]) -> tuple[int, ...]:
    params = tuple(int(p) for p in params)
    arity = {"hamming2": 2, "hypercube": 1, "prism_cycle": 1, "grid_square": 1}
    if family not in arity:
        raise ParameterError(f"unknown family {family!r}; expected one of {', '.join(CLOSED_FORM_FAMILIES)}")
    if len(params) != arity[family]:
        raise ParameterError(f"{family} takes {arity[family]} parameter(s), got {len(params)}")
    minimum = {"hamming2": 2, "hypercube": 2, "prism_cycle": 3, "grid_square": 2}[family]
    if min(params) < minimum:
        raise ParameterError(f"{family} requires parameters >= {minimum}")
    return params


def build_graph(family: str, params: Sequence[int]) -> Graph:
    params = _check_params(family, params)
    if family == "hamming2":
        return hamming2(*params)
    if family == "hypercube":
        return hypercube(params[0])
    if family == "prism_cycle":
        return prism(params[0])
    return grid(params[0], params[0])


def xi_closed_form(family: str, params: Sequence[int]) -> ClosedFormResult:
    params = _check_params(family, params)
    if family == "hamming2":
        n, m = sorted(params)
        value = m if n == 2 else min(n, m, 5)
    elif family == "hypercube":
        n = params[0]
        if n % 4 == 0:
            lo = 2 ** (n - 1)
            return ClosedFormResult(family, params, lo, lo + 2 ** (n // 2 - 2))
        value = 2 ** (n - 1)
    elif family == "prism_cycle":
        n = params[0]
        value = (5 * n - 2) // 4 if n % 4 == 2 else n
    else:
        n = params[0]
        value = (n * n + 1) // 2
    return ClosedFormResult(family, params, value, value, value)


def construct_witness(family: str, params: Sequence[int]) -> WitnessSet:
    params = _check_params(family, params)
    builder = {
        "hamming2": _hamming_witness,
        "hypercube": _hypercube_witness,
        "prism_cycle": _prism_witness,
        "grid_square": _grid_witness,
    }[family]
    vertices, tag = builder(*params)
    return WitnessSet(family, params, tuple(sorted(vertices)), tag)


def _hamming_witness(n: int, m: int) -> tuple[list[Label], str]:
    transpose = n > m
    if transpose:
        n, m = m, n
    if n == 2 and m == 2:
        # K_2□K_2 is C_4; a colour class works, a row does not
        s, tag = [(1, 1), (2, 2)], "K2xK2 = C4 partite set"
    elif n == 2:
        s, tag = [(1, j) for j in range(1, m + 1)], "K2xKm row {1}x[m]"
    elif n in (3, 4):
        s, tag = [(i, 1) for i in range(1, n + 1)], f"K{n}xKm column [{n}]x{{1}}"
    else:
        s, tag = [(1, 1), (2, 1), (3, 1), (2, 2), (3, 3)], "KnxKm five-vertex set"
    if transpose:
        s = [(b, a) for a, b in s]
    return s, tag


def _hypercube_witness(n: int) -> tuple[list[Label], str]:
    verts = [tuple((v >> (n - 1 - b)) & 1 for b in range(n)) for v in range(2 ** n)]
    odd = [v for v in verts if sum(v) % 2 == 1]
    if n % 4:
        return odd, "Qn odd-weight class"
    half = n // 2
    a_star = [v for v in verts if sum(v) % 2 == 0 and v[0] == 0 and not any(v[half:])]
    return odd + a_star, "Qn odd-weight class plus A*"


def _prism_witness(n: int) -> tuple[list[Label], str]:
    if n % 2 == 1:
        return [(x, 2) for x in range(1, n + 1)], "CnxK2 layer [n]x{2}"
    odd_sum = [(x, y) for x in range(1, n + 1) for y in (1, 2) if (x + y) % 2 == 1]
    if n % 4 == 0:
        return odd_sum, "CnxK2 odd coordinate sum"
    s_star = [(2 * i - 1, 1) for i in range(1, (n - 2) // 4 + 1)]
    return odd_sum + s_star, "CnxK2 odd coordinate sum plus S*"


def _grid_witness(n: int) -> tuple[list[Label], str]:
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if (i - j) % 2 == 0], "PnxPn class B_n"


@dataclass
class TheoremReport:
    family: str
    params: tuple[int, ...]
    closed_form: ClosedFormResult
    witness_size: int
    witness_verified: bool
    solver_xi: int | None = None
    timed_out: bool = False
    solver_bounds: Bounds | None = None
    solver_seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def agree(self) -> bool:
        if not self.witness_verified or self.witness_size != self.closed_form.upper:
            return False
        if self.solver_xi is None:
            return False
        cf = self.closed_form
        if cf.value is not None:
            return self.solver_xi == cf.value
        return cf.lower <= self.solver_xi <= cf.upper


def verify_theorem(
    family: str,
    params: Sequence[int],
    budget: float | None = DEFAULT_BUDGET,
    strategy: str = "auto",
    solve: bool = True,
) -> TheoremReport:
    """Check closed form, witness and (optionally) the exact solver against each other.

    A solver timeout does not raise: the report carries ``timed_out`` and the
    bounds the solver had reached.
    """
    params = _check_params(family, params)
    cf = xi_closed_form(family, params)
    g = build_graph(family, params)
    d = all_pairs_distances(g)
    witness = construct_witness(family, params)
    verified = is_equalizer_set(g, d, g.indices(witness.vertices)).is_equalizer
    report = TheoremReport(family, params, cf, len(witness), verified)
    if solve:
        try:
            sol = solve_exact(g, d, strategy=strategy, budget=budget)
        except SolverTimeout as exc:
            report.timed_out = True
            report.solver_bounds = exc.bounds
            report.notes.append("solver budget exhausted")
        else:
            report.solver_xi = sol.xi
            report.solver_seconds = sol.seconds
    return report
