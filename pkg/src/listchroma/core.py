"""Instance model, color partitioning, preprocessing and branching transformations.

Vertices are dense integers 0..n-1 and adjacency is kept as one bitmask per
vertex, so stability tests and vertex-set algebra are single int operations.
Colors are opaque non-negative integers; they survive renumbering of vertices
unchanged, which keeps solution reconstruction trivial.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

EPS = 1e-6


class EmptyListError(ValueError):
    """Some vertex ended up with an empty color list (trivially infeasible)."""

    def __init__(self, vertex: int):
        super().__init__(f"vertex {vertex} has an empty color list")
        self.vertex = vertex


class ColoringError(ValueError):
    """A candidate assignment violates list membership, properness or weight."""


class ReconstructionBug(RuntimeError):
    """Internal error: a reconstructed coloring failed validation."""


class SearchTimeout(Exception):
    """Raised internally when a solve deadline expires."""


class Deadline:
    """Wall-clock budget shared by the search and the pricing routines."""

    __slots__ = ("end",)

    def __init__(self, seconds: float | None):
        self.end = None if seconds is None else time.perf_counter() + seconds

    def expired(self) -> bool:
        return self.end is not None and time.perf_counter() >= self.end

    def check(self) -> None:
        if self.expired():
            raise SearchTimeout


def bits(mask: int) -> list[int]:
    """Indices of the set bits of mask, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph; adj[v] is the neighbor bitmask of v."""

    n: int
    adj: tuple[int, ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        masks = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return cls(n, tuple(masks))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            m = self.adj[u] >> (u + 1) << (u + 1)
            out.extend((u, v) for v in bits(m))
        return out

    @property
    def m(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2


@dataclass(frozen=True)
class Instance:
    """A list-coloring instance: graph, colors with weights, per-vertex lists.

    Invariant: every color appears in at least one list and every list is a
    non-empty subset of `colors`. Use build_instance to construct.
    """

    graph: Graph
    colors: tuple[int, ...]
    weights: dict[int, int]
    lists: tuple[frozenset[int], ...]

    @property
    def n(self) -> int:
        return self.graph.n

    def color_mask(self, j: int) -> int:
        """Bitmask of the vertices whose list contains color j."""
        m = 0
        for v, lst in enumerate(self.lists):
            if j in lst:
                m |= 1 << v
        return m


def build_instance(
    graph: Graph,
    colors: Iterable[int],
    weights: Mapping[int, int],
    lists: Sequence[Iterable[int]],
) -> Instance:
    """Normalize raw data into an Instance, dropping colors used by no list."""
    declared = set(colors)
    if len(lists) != graph.n:
        raise ValueError(f"expected {graph.n} lists, got {len(lists)}")
    norm_lists = []
    used: set[int] = set()
    for v, lst in enumerate(lists):
        s = frozenset(lst)
        if not s:
            raise EmptyListError(v)
        extra = s - declared
        if extra:
            raise ValueError(f"list of vertex {v} references undeclared colors {sorted(extra)}")
        norm_lists.append(s)
        used |= s
    kept = tuple(sorted(used))
    w = {}
    for j in kept:
        if j not in weights:
            raise ValueError(f"no weight declared for color {j}")
        wj = int(weights[j])
        if wj != weights[j]:
            raise ValueError(f"non-integral weight for color {j}")
        if wj < 0:
            raise ValueError(f"negative weight for color {j}")
        w[j] = wj
    return Instance(graph, kept, w, tuple(norm_lists))


@dataclass(frozen=True)
class ColorPartition:
    """Partition of the colors into indistinguishability classes.

    Colors j and k share a class iff they have equal weight and identical
    vertex sets V_j = V_k (hence identical induced subgraphs). The class
    representative is its smallest color id.
    """

    reps: tuple[int, ...]
    class_members: dict[int, tuple[int, ...]]
    class_size: dict[int, int]
    vertices: dict[int, tuple[int, ...]]
    vertex_mask: dict[int, int]
    bounded: frozenset[int]
    rep_of: dict[int, int]


def partition_colors(inst: Instance) -> ColorPartition:
    """Group indistinguishable colors; deterministic for identical instances."""
    groups: dict[tuple[int, int], list[int]] = {}
    color_masks = {j: 0 for j in inst.colors}
    for v, lst in enumerate(inst.lists):
        bit = 1 << v
        for j in lst:
            color_masks[j] |= bit
    for j in inst.colors:  # ascending, so the first member is the smallest
        key = (inst.weights[j], color_masks[j])
        groups.setdefault(key, []).append(j)
    reps = []
    members = {}
    size = {}
    verts = {}
    vmask = {}
    rep_of = {}
    bounded = set()
    for (w, mask), cols in groups.items():
        k = cols[0]
        reps.append(k)
        members[k] = tuple(cols)
        size[k] = len(cols)
        vmask[k] = mask
        verts[k] = tuple(bits(mask))
        for j in cols:
            rep_of[j] = k
        if mask.bit_count() >= len(cols) + 1:
            bounded.add(k)
    reps.sort()
    return ColorPartition(
        reps=tuple(reps),
        class_members=members,
        class_size=size,
        vertices=verts,
        vertex_mask=vmask,
        bounded=frozenset(bounded),
        rep_of=rep_of,
    )


@dataclass(frozen=True)
class NodeState:
    """One subproblem of the search tree plus the data needed to undo it.

    merge_map sends every still-live root vertex to its representative in the
    current instance. fixed holds (root vertex, color) pairs decided by
    singleton preprocessing; the weight of each fixed color is zeroed in the
    current instance so that LP bounds stay exact, and fixed_weight carries
    the root weight of the distinct fixed colors. parent_map translates the
    previous node's vertex ids into this node's (vertices absent from it were
    merged away or fixed); it is what column inheritance consumes.
    """

    instance: Instance
    merge_map: dict[int, int]
    fixed: tuple[tuple[int, int], ...]
    fixed_weight: int
    depth: int
    parent_map: dict[int, int] | None = None


def root_state(inst: Instance) -> NodeState:
    return NodeState(
        instance=inst,
        merge_map={v: v for v in range(inst.n)},
        fixed=(),
        fixed_weight=0,
        depth=0,
        parent_map=None,
    )


def _compose(first: dict[int, int] | None, second: dict[int, int]) -> dict[int, int]:
    if first is None:
        return dict(second)
    return {a: second[b] for a, b in first.items() if b in second}


def _drop_vertex(masks: list[int], u: int) -> list[int]:
    """Remove vertex u from a bitmask adjacency, shifting higher ids down."""
    low = (1 << u) - 1
    out = []
    for x, m in enumerate(masks):
        if x == u:
            continue
        out.append((m & low) | (m >> (u + 1)) << u)
    return out


def preprocess_singletons(state: NodeState) -> NodeState | None:
    """Fix every vertex with a one-color list, to fixpoint.

    Fixing vertex u to color j removes u, deletes j from the lists of u's
    neighbors, and zeroes j's weight in the residual instance (j is paid for
    once, in fixed_weight; later uses of j by non-neighbors are free).
    Returns None when a neighbor list empties, i.e. the subproblem has no
    list coloring.
    """
    inst = state.instance
    adj = list(inst.graph.adj)
    lists = [set(l) for l in inst.lists]
    weights = dict(inst.weights)
    merge_map = dict(state.merge_map)
    fixed = list(state.fixed)
    fixed_weight = state.fixed_weight
    pmap = {v: v for v in range(inst.n)}

    while True:
        u = next((v for v in range(len(lists)) if len(lists[v]) == 1), None)
        if u is None:
            break
        (j,) = lists[u]
        for r in sorted(r for r, cur in merge_map.items() if cur == u):
            fixed.append((r, j))
        fixed_weight += weights.get(j, 0)
        weights[j] = 0
        for z in bits(adj[u]):
            lists[z].discard(j)
            if not lists[z]:
                return None
        adj = _drop_vertex(adj, u)
        del lists[u]
        merge_map = {
            r: cur - (cur > u) for r, cur in merge_map.items() if cur != u
        }
        pmap = {a: b - (b > u) for a, b in pmap.items() if b != u}

    n2 = len(lists)
    graph = Graph(n2, tuple(adj))
    surviving = sorted({j for l in lists for j in l})
    new_inst = build_instance(graph, surviving, weights, lists) if n2 else Instance(
        graph, (), {}, ()
    )
    return NodeState(
        instance=new_inst,
        merge_map=merge_map,
        fixed=tuple(fixed),
        fixed_weight=fixed_weight,
        depth=state.depth,
        parent_map=_compose(state.parent_map, pmap),
    )


def _check_branch_pair(state: NodeState, u: int, v: int) -> None:
    inst = state.instance
    if u == v:
        raise ValueError("branching pair must be two distinct vertices")
    if inst.graph.has_edge(u, v):
        raise ValueError(f"branching pair ({u},{v}) is adjacent")
    if not (inst.lists[u] & inst.lists[v]):
        raise ValueError(f"branching pair ({u},{v}) has disjoint lists")


def branch_differ(state: NodeState, u: int, v: int) -> NodeState:
    """Child where u and v get different colors: add the edge (u,v)."""
    _check_branch_pair(state, u, v)
    inst = state.instance
    adj = list(inst.graph.adj)
    adj[u] |= 1 << v
    adj[v] |= 1 << u
    child = Instance(Graph(inst.n, tuple(adj)), inst.colors, dict(inst.weights), inst.lists)
    return NodeState(
        instance=child,
        merge_map=dict(state.merge_map),
        fixed=state.fixed,
        fixed_weight=state.fixed_weight,
        depth=state.depth + 1,
        parent_map={x: x for x in range(inst.n)},
    )


def branch_same(state: NodeState, u: int, v: int) -> NodeState:
    """Child where u and v share a color: merge v into u, intersect lists."""
    _check_branch_pair(state, u, v)
    inst = state.instance
    n = inst.n
    merged_list = inst.lists[u] & inst.lists[v]
    rename = {x: x - (x > v) for x in range(n) if x != v}
    edges = set()
    for a, b in inst.graph.edges():
        a2 = u if a == v else a
        b2 = u if b == v else b
        if a2 != b2:
            ra, rb = rename[a2], rename[b2]
            edges.add((min(ra, rb), max(ra, rb)))
    graph = Graph.from_edges(n - 1, sorted(edges))
    lists = [merged_list if x == u else inst.lists[x] for x in range(n) if x != v]
    child = build_instance(graph, inst.colors, inst.weights, lists)
    merge_map = {
        r: rename[u if cur == v else cur] for r, cur in state.merge_map.items()
    }
    pmap = dict(rename)
    pmap[v] = rename[u]
    return NodeState(
        instance=child,
        merge_map=merge_map,
        fixed=state.fixed,
        fixed_weight=state.fixed_weight,
        depth=state.depth + 1,
        parent_map=pmap,
    )


@dataclass(frozen=True)
class ListColoring:
    """A validated total coloring of the root instance."""

    assignment: tuple[tuple[int, int], ...]
    weight: int

    def as_dict(self) -> dict[int, int]:
        return dict(self.assignment)


def validate_coloring(inst: Instance, assignment: Mapping[int, int]) -> int:
    """Check list membership and properness; return the active-color weight."""
    if len(assignment) != inst.n or set(assignment) != set(range(inst.n)):
        raise ColoringError("assignment is not total over the vertices")
    for v in range(inst.n):
        j = assignment[v]
        if j not in inst.lists[v]:
            raise ColoringError(f"color {j} not in the list of vertex {v}")
    for u, v in inst.graph.edges():
        if assignment[u] == assignment[v]:
            raise ColoringError(f"edge ({u},{v}) is monochromatic")
    return sum(inst.weights[j] for j in set(assignment.values()))


def list_coloring(inst: Instance, assignment: Mapping[int, int]) -> ListColoring:
    weight = validate_coloring(inst, assignment)
    return ListColoring(tuple(sorted(assignment.items())), weight)


def assign_class_colors(
    chosen: Sequence[tuple[int, int]], partition: ColorPartition
) -> list[int]:
    """Give each chosen (mask, class rep) column a distinct concrete color.

    Columns of the same class receive the class members in order; more
    columns than |C^k| means the master violated a class bound.
    """
    counters: dict[int, int] = {}
    out = []
    for mask, rep in chosen:
        members = partition.class_members[rep]
        idx = counters.get(rep, 0)
        if idx >= len(members):
            raise ReconstructionBug(
                f"class {rep} has {len(members)} colors but more columns were chosen"
            )
        out.append(members[idx])
        counters[rep] = idx + 1
    return out


def lift_node_assignment(
    node_assignment: Mapping[int, int], state: NodeState, root: Instance
) -> ListColoring:
    """Map a coloring of the node instance back to the root vertices."""
    result: dict[int, int] = {}
    for r, j in state.fixed:
        if r in result:
            raise ReconstructionBug(f"root vertex {r} fixed twice")
        result[r] = j
    for r, cur in state.merge_map.items():
        if cur not in node_assignment:
            raise ReconstructionBug(f"node vertex {cur} left uncolored")
        if r in result:
            raise ReconstructionBug(f"root vertex {r} both fixed and live")
        result[r] = node_assignment[cur]
    try:
        return list_coloring(root, result)
    except ColoringError as exc:
        raise ReconstructionBug(str(exc)) from exc


def reconstruct(
    chosen: Sequence[tuple[int, int]],
    class_colors: Sequence[int],
    state: NodeState,
    root: Instance,
) -> ListColoring:
    """Turn an integral column selection into a root coloring.

    A vertex covered by several chosen stable sets takes the color of the
    first covering column in selection order.
    """
    node_assignment: dict[int, int] = {}
    for (mask, _rep), color in zip(chosen, class_colors):
        for v in bits(mask):
            node_assignment.setdefault(v, color)
    uncovered = [v for v in range(state.instance.n) if v not in node_assignment]
    if uncovered:
        raise ReconstructionBug(f"vertices {uncovered} not covered by the selection")
    return lift_node_assignment(node_assignment, state, root)
