"""Restricted master problem: column pool, LP relaxation, duals, integrality.

The LP is
    min  sum_cols cost * x
    s.t. sum_{columns covering v} x >= 1          (one row per vertex)
         sum_{columns of class k} x <= |C^k|      (bounded classes only)
         x >= 0
fed to HiGHS (dual simplex, via scipy.linprog) in <= form. Vertex duals pi
and class duals gamma come back from the row marginals with flipped sign.
Upper bounds x <= 1 are intentionally absent; non-negative costs make them
redundant at some optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .core import EPS, ColorPartition, NodeState, bits, partition_colors


class DuplicateColumnError(ValueError):
    """The pricer handed back a column already in the pool."""


class NumericalFailure(RuntimeError):
    """The LP solver did not return a clean optimal basic solution."""


@dataclass(frozen=True)
class Column:
    """A master variable: a stable set of G^k priced at w_k.

    Dummy columns (class_rep None) are the per-vertex big-M singletons that
    keep the initial LP feasible.
    """

    mask: int
    class_rep: int | None
    cost: int

    @property
    def is_dummy(self) -> bool:
        return self.class_rep is None

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def vertices(self) -> list[int]:
        return bits(self.mask)

    @property
    def key(self) -> tuple[int, int | None]:
        return (self.mask, self.class_rep)


@dataclass(frozen=True)
class DualSolution:
    pi: tuple[float, ...]
    gamma: dict[int, float]

    def gamma_of(self, k: int) -> float:
        return self.gamma.get(k, 0.0)


@dataclass(frozen=True)
class LPResult:
    objective: float
    values: tuple[float, ...]
    columns: tuple[Column, ...]
    duals: DualSolution


class MasterProblem:
    """Mutable column pool plus the fixed row structure of one search node."""

    def __init__(self, state: NodeState, partition: ColorPartition, big_m: int):
        self.instance = state.instance
        self.partition = partition
        self.big_m = big_m
        self.columns: list[Column] = []
        self._keys: set[tuple[int, int | None]] = set()

    def __len__(self) -> int:
        return len(self.columns)


def init_with_dummies(state: NodeState, partition: ColorPartition | None = None) -> MasterProblem:
    """Master seeded with one big-M singleton column per vertex."""
    inst = state.instance
    if inst.n < 1:
        raise ValueError("empty instance has no master problem")
    if partition is None:
        partition = partition_colors(inst)
    big_m = 1 + sum(inst.weights[j] for j in inst.colors)
    mp = MasterProblem(state, partition, big_m)
    for v in range(inst.n):
        col = Column(1 << v, None, big_m)
        mp.columns.append(col)
        mp._keys.add(col.key)
    return mp


def add_columns(mp: MasterProblem, cols: list[Column]) -> None:
    """Validate and append new columns; duplicates signal a pricer bug."""
    inst = mp.instance
    part = mp.partition
    for col in cols:
        if col.mask == 0:
            raise ValueError("empty column")
        if col.is_dummy:
            raise ValueError("dummy columns are created only at initialization")
        if col.class_rep not in part.class_members:
            raise ValueError(f"column class {col.class_rep} is not a representative")
        if col.mask & ~part.vertex_mask[col.class_rep]:
            raise ValueError(f"column leaves V_k of class {col.class_rep}")
        for v in bits(col.mask):
            if inst.graph.adj[v] & col.mask:
                raise ValueError("column is not a stable set")
        if col.cost != inst.weights[col.class_rep]:
            raise ValueError("column cost disagrees with its class weight")
        if col.key in mp._keys:
            raise DuplicateColumnError(f"column {col.vertices()} class {col.class_rep}")
        mp.columns.append(col)
        mp._keys.add(col.key)


def solve_lp(mp: MasterProblem) -> LPResult:
    """Solve the restricted LP to an optimal basic solution with duals."""
    cols = mp.columns
    n = mp.instance.n
    bounded = sorted(mp.partition.bounded)
    class_row = {k: n + i for i, k in enumerate(bounded)}
    nrows = n + len(bounded)

    cost = np.empty(len(cols))
    data: list[float] = []
    ri: list[int] = []
    ci: list[int] = []
    for idx, col in enumerate(cols):
        cost[idx] = col.cost
        for v in col.vertices():
            ri.append(v)
            ci.append(idx)
            data.append(-1.0)
        if not col.is_dummy and col.class_rep in class_row:
            ri.append(class_row[col.class_rep])
            ci.append(idx)
            data.append(1.0)
    a_ub = sparse.csc_matrix((data, (ri, ci)), shape=(nrows, len(cols)))
    b_ub = np.concatenate(
        [np.full(n, -1.0), np.array([mp.partition.class_size[k] for k in bounded], dtype=float)]
    )
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=(0, None), method="highs-ds")
    if res.status != 0:
        raise NumericalFailure(f"LP solve failed (status {res.status}): {res.message}")
    marg = res.ineqlin.marginals
    pi = tuple(max(0.0, -float(marg[v])) for v in range(n))
    gamma = {k: max(0.0, -float(marg[class_row[k]])) for k in bounded}
    return LPResult(
        objective=float(res.fun),
        values=tuple(float(x) for x in res.x),
        columns=tuple(cols),
        duals=DualSolution(pi, gamma),
    )


INTEGRAL = "integral"
SINGLETON_FRACTIONAL_ONLY = "singleton_fractional_only"
FRACTIONAL_ON_BIG_SETS = "fractional_on_big_sets"


@dataclass(frozen=True)
class IntegralityVerdict:
    kind: str
    selection: tuple[int, ...] | None  # column indices, set when kind == INTEGRAL


def _is_integral(x: float) -> bool:
    return abs(x - round(x)) <= EPS


def check_integrality(res: LPResult) -> IntegralityVerdict:
    """Classify an optimal LP point for the branching logic.

    Integral solutions over the |S| >= 2 columns are enough to recover an
    optimal integer solution from the remaining singletons (their residual
    constraint matrix is totally unimodular), so only fractional big sets
    force a branching step.
    """
    big_fractional = any(
        col.size >= 2 and not _is_integral(x) for col, x in zip(res.columns, res.values)
    )
    if big_fractional:
        return IntegralityVerdict(FRACTIONAL_ON_BIG_SETS, None)
    all_integral = all(_is_integral(x) for x in res.values)
    dummies_zero = all(
        x <= EPS for col, x in zip(res.columns, res.values) if col.is_dummy
    )
    if all_integral and dummies_zero:
        sel = tuple(i for i, x in enumerate(res.values) if x > 0.5)
        return IntegralityVerdict(INTEGRAL, sel)
    return IntegralityVerdict(SINGLETON_FRACTIONAL_ONLY, None)


@dataclass(frozen=True)
class ExtractResult:
    """An integral selection recovered from a singleton-fractional LP point."""

    selection: tuple[int, ...]
    objective: float
    fixed_cost: int
    residual_vertices: tuple[int, ...]
    residual_columns: tuple[int, ...]
    capacities: dict[int, int]


def extract_integer_solution(mp: MasterProblem, res: LPResult) -> ExtractResult:
    """Recover an integer optimum when only singleton columns are fractional.

    Keeps the big columns at value one, then re-solves the residual LP over
    singleton columns; total unimodularity of that residual guarantees the
    basic optimum is 0/1, at no change in objective.
    """
    cols = res.columns
    keep = [i for i, col in enumerate(cols) if col.size >= 2 and res.values[i] > 0.5]
    covered = 0
    used: dict[int, int] = {}
    fixed_cost = 0
    for i in keep:
        covered |= cols[i].mask
        fixed_cost += cols[i].cost
        k = cols[i].class_rep
        if k in mp.partition.bounded:
            used[k] = used.get(k, 0) + 1
    residual = [v for v in range(mp.instance.n) if not covered >> v & 1]
    caps = {k: mp.partition.class_size[k] - used.get(k, 0) for k in sorted(mp.partition.bounded)}
    if any(c < 0 for c in caps.values()):
        raise NumericalFailure("big columns exceed a class capacity")
    cand = [
        i for i, col in enumerate(cols) if col.size == 1 and col.mask & ~covered
    ]

    chosen_singletons: list[int] = []
    residual_obj = 0.0
    if residual:
        vrow = {v: r for r, v in enumerate(residual)}
        bounded = sorted(caps)
        crow = {k: len(residual) + r for r, k in enumerate(bounded)}
        data: list[float] = []
        ri: list[int] = []
        ci: list[int] = []
        for j, i in enumerate(cand):
            col = cols[i]
            (v,) = col.vertices()
            ri.append(vrow[v])
            ci.append(j)
            data.append(-1.0)
            if col.class_rep in crow:
                ri.append(crow[col.class_rep])
                ci.append(j)
                data.append(1.0)
        a_ub = sparse.csc_matrix(
            (data, (ri, ci)), shape=(len(residual) + len(bounded), len(cand))
        )
        b_ub = np.concatenate(
            [np.full(len(residual), -1.0), np.array([caps[k] for k in bounded], dtype=float)]
        )
        c = np.array([cols[i].cost for i in cand], dtype=float)
        sub = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=(0, None), method="highs-ds")
        if sub.status != 0:
            raise NumericalFailure(f"residual LP failed (status {sub.status})")
        for j, y in enumerate(sub.x):
            if not _is_integral(float(y)):
                raise NumericalFailure("residual LP returned a fractional vertex")
            if y > 0.5:
                chosen_singletons.append(cand[j])
        residual_obj = float(sub.fun)

    selection = tuple(sorted(keep + chosen_singletons))
    for i in selection:
        if cols[i].is_dummy:
            raise NumericalFailure("dummy column survived integer extraction")
    objective = fixed_cost + residual_obj
    if abs(objective - res.objective) > 1e-6 * max(1.0, abs(res.objective)):
        raise NumericalFailure(
            f"extraction changed the objective: {objective} vs {res.objective}"
        )
    return ExtractResult(
        selection=selection,
        objective=objective,
        fixed_cost=fixed_cost,
        residual_vertices=tuple(residual),
        residual_columns=tuple(cand),
        capacities=caps,
    )


def node_lower_bound(res: LPResult, big_m: int) -> int | None:
    """Integer lower bound from the LP value; None flags an infeasible node."""
    if res.objective >= big_m - EPS:
        return None
    return math.ceil(res.objective - EPS)
