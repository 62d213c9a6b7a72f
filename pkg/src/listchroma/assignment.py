"""Exact resolution of nodes where every color subgraph G^k is a clique.

In that regime each color can serve at most one vertex, so the node reduces
to minimum weight perfect matching between vertices (padded with zero-cost
dummies) and concrete colors. Forbidden vertex-color pairs carry a big-M
cost; a minimum matching that still touches one proves infeasibility.
"""

from __future__ import annotations

from .core import ColorPartition, Graph, NodeState, bits


def all_complete(partition: ColorPartition, graph: Graph) -> bool:
    """True iff every class vertex set induces a clique."""
    for k in partition.reps:
        mask = partition.vertex_mask[k]
        for v in bits(mask):
            if mask & ~(graph.adj[v] | 1 << v):
                return False
    return True


def hungarian(cost: list[list[int]]) -> tuple[int, list[int]]:
    """Minimum cost perfect matching of a square matrix.

    Standard O(n^3) potential/augmenting-path formulation. Returns the total
    cost and, per row, the matched column. Costs must support +/-/< (ints
    here, which keeps everything exact).
    """
    n = len(cost)
    if n == 0:
        return 0, []
    inf = float("inf")
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    match_col = [0] * (n + 1)  # column j -> row matched to it (1-based, 0 free)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        match_col[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match_col[j0]
            delta = inf
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match_col[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match_col[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match_col[j0] = match_col[j1]
            j0 = j1
    out = [0] * n
    total = 0
    for j in range(1, n + 1):
        if match_col[j]:
            out[match_col[j] - 1] = j - 1
            total += cost[match_col[j] - 1][j - 1]
    return total, out


def solve_assignment(state: NodeState) -> dict[int, int] | None:
    """Color an all-complete node optimally; None when it has no coloring."""
    inst = state.instance
    n = inst.n
    colors = list(inst.colors)
    m = len(colors)
    if n == 0:
        return {}
    if n > m:
        return None
    big = 1 + sum(inst.weights[j] for j in colors)
    cost = [
        [inst.weights[j] if j in inst.lists[vtx] else big for j in colors]
        for vtx in range(n)
    ]
    cost.extend([0] * m for _ in range(m - n))
    _, match = hungarian(cost)
    out = {}
    for vtx in range(n):
        j = colors[match[vtx]]
        if j not in inst.lists[vtx]:
            return None
        out[vtx] = j
    return out
