"""Connected components of clique-overlap graphs.

Three adjacency rules are supported: sharing at least ell vertices,
being vertex-disjoint but joined by at least ell edges, and the oriented
analogue of the shared-vertex rule. The shared-vertex rules never
materialize overlap edges: each clique is keyed on all of its ell-subsets
and cliques sharing a key are unioned (two k-sets share >= ell vertices
exactly when they share some ell-subset).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations

from .cliques import Clique, OrientedCopy
from .errors import InvalidParameterError
from .graphs import UndirectedGraph

PAIR_SCAN_WARN = 100_000


class _DisjointSet:
    """Union-find with union by size and path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # tie on size: keep the smaller index as root, for determinism
        if self.size[ra] < self.size[rb] or (self.size[ra] == self.size[rb] and rb < ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


@dataclass(frozen=True)
class ComponentSummary:
    """Partition of clique indices into overlap components.

    Component ids run 0..component_count-1, assigned by decreasing size
    with ties broken by the smallest member clique index. sizes is the
    matching descending list.
    """

    component_of: list[int]
    sizes: list[int]

    @property
    def component_count(self) -> int:
        return len(self.sizes)

    @property
    def c1(self) -> int:
        return self.sizes[0] if self.sizes else 0

    @property
    def c2(self) -> int:
        return self.sizes[1] if len(self.sizes) > 1 else 0

    def members(self) -> list[list[int]]:
        """Clique indices grouped by component id."""
        groups: list[list[int]] = [[] for _ in range(len(self.sizes))]
        for idx, comp in enumerate(self.component_of):
            groups[comp].append(idx)
        return groups


def _summarize(ds: _DisjointSet, n_items: int) -> ComponentSummary:
    roots = [ds.find(i) for i in range(n_items)]
    first_member: dict[int, int] = {}
    for i, r in enumerate(roots):
        if r not in first_member:
            first_member[r] = i
    order = sorted(first_member, key=lambda r: (-ds.size[r], first_member[r]))
    relabel = {r: new for new, r in enumerate(order)}
    component_of = [relabel[r] for r in roots]
    sizes = [ds.size[r] for r in order]
    return ComponentSummary(component_of=component_of, sizes=sizes)


def _clique_order(cliques: list[Clique]) -> int:
    if not cliques:
        return 0
    k = len(cliques[0])
    if any(len(c) != k for c in cliques):
        raise InvalidParameterError("cliques must all have the same order")
    return k


def components_by_shared_vertices(cliques: list[Clique], ell: int) -> ComponentSummary:
    """Components under the rule: adjacent iff sharing >= ell vertices.

    1 <= ell <= k-1. Runs in time proportional to the number of
    (clique, ell-subset) keys.
    """
    k = _clique_order(cliques)
    if cliques and not (1 <= ell <= k - 1):
        raise InvalidParameterError("ell must be in [1, k-1]")
    ds = _DisjointSet(len(cliques))
    first_owner: dict[tuple[int, ...], int] = {}
    setdefault = first_owner.setdefault
    for idx, cq in enumerate(cliques):
        for key in combinations(cq, ell):
            j = setdefault(key, idx)
            if j != idx:
                ds.union(j, idx)
    return _summarize(ds, len(cliques))


def components_by_cross_edges(
    g: UndirectedGraph, cliques: list[Clique], ell: int
) -> ComponentSummary:
    """Components under the rule: vertex-disjoint AND >= ell cross edges.

    1 <= ell <= k*k. Pairwise scan with a disjointness pre-filter; the
    cross-edge count short-circuits at ell. Quadratic in the number of
    cliques, which is cheap exactly in the sparse regime this rule is
    meant for; a warning is issued above PAIR_SCAN_WARN cliques.
    """
    k = _clique_order(cliques)
    if cliques and not (1 <= ell <= k * k):
        raise InvalidParameterError("ell must be in [1, k^2]")
    m = len(cliques)
    if m > PAIR_SCAN_WARN:
        warnings.warn(
            f"pairwise scan over {m} cliques ({m * (m - 1) // 2} pairs)",
            RuntimeWarning,
            stacklevel=2,
        )
    nbr = g.adjacency_sets
    vsets = [set(c) for c in cliques]
    ds = _DisjointSet(m)
    for i in range(m):
        vi = vsets[i]
        ci = cliques[i]
        for j in range(i + 1, m):
            if not vi.isdisjoint(vsets[j]):
                continue
            cnt = 0
            for x in ci:
                nx = nbr[x]
                for y in cliques[j]:
                    if y in nx:
                        cnt += 1
                        if cnt >= ell:
                            break
                if cnt >= ell:
                    break
            if cnt >= ell:
                ds.union(i, j)
    return _summarize(ds, m)


def components_oriented(copies: list[OrientedCopy], ell: int) -> ComponentSummary:
    """Components of oriented copies, adjacent iff sharing >= ell vertices.

    Copies on the same vertex set (possible with doubled arcs) share all
    their ell-subsets, so the keying handles them natively.
    """
    k = _clique_order([c.vertices for c in copies])
    if copies and not (1 <= ell <= k - 1):
        raise InvalidParameterError("ell must be in [1, k-1]")
    ds = _DisjointSet(len(copies))
    first_owner: dict[tuple[int, ...], int] = {}
    setdefault = first_owner.setdefault
    for idx, copy in enumerate(copies):
        for key in combinations(copy.vertices, ell):
            j = setdefault(key, idx)
            if j != idx:
                ds.union(j, idx)
    return _summarize(ds, len(copies))


@dataclass(frozen=True)
class ExplorationRecord:
    """Result of a local component exploration.

    cliques: the reached cliques, lexicographically sorted.
    rounds: number of frontier passes that discovered at least one new clique.
    truncated: True when the budget stopped the walk before exhaustion.
    """

    cliques: list[Clique]
    rounds: int
    truncated: bool


def _cliques_containing(
    g: UndirectedGraph, base: tuple[int, ...], k: int
) -> list[Clique]:
    """All k-cliques of g containing the clique `base`."""
    nbr = g.adjacency_sets
    common: set[int] = set.intersection(*(nbr[v] for v in base))
    need = k - len(base)
    out: list[Clique] = []

    def grow(chosen: tuple[int, ...], cand: set[int], want: int) -> None:
        if want == 0:
            out.append(tuple(sorted(base + chosen)))
            return
        for v in sorted(cand):
            grow(chosen + (v,), {w for w in cand if w > v} & nbr[v], want - 1)

    grow((), common, need)
    return out


def explore_component(
    g: UndirectedGraph, start: Clique, ell: int, budget: int
) -> ExplorationRecord:
    """Grow the overlap component of `start` by testing ell-subset frontiers.

    Every ell-subset of a reached clique is marked untested on first sight;
    each pass tests the untested sets from the previous pass, reaching all
    k-cliques that contain them. Stops when the frontier empties or when
    `budget` cliques have been reached (then truncated=True if anything
    was left undone). With enough budget the reached set is exactly the
    start's component under components_by_shared_vertices.
    """
    k = len(start)
    if budget <= 0:
        raise InvalidParameterError("budget must be >= 1")
    if not (1 <= ell <= k - 1):
        raise InvalidParameterError("ell must be in [1, k-1]")
    start = tuple(sorted(start))
    nbr = g.adjacency_sets
    for a, b in combinations(start, 2):
        if b not in nbr[a]:
            raise InvalidParameterError("start is not a clique of the graph")

    reached: set[Clique] = {start}
    tested: set[tuple[int, ...]] = set()
    frontier: list[tuple[int, ...]] = list(combinations(start, ell))
    queued: set[tuple[int, ...]] = set(frontier)
    rounds = 0
    truncated = False
    while frontier and not truncated:
        next_frontier: list[tuple[int, ...]] = []
        found_new = False
        for sub in frontier:
            tested.add(sub)
            for cq in _cliques_containing(g, sub, k):
                if cq in reached:
                    continue
                if len(reached) >= budget:
                    truncated = True
                    break
                reached.add(cq)
                found_new = True
                for key in combinations(cq, ell):
                    if key not in queued:
                        queued.add(key)
                        next_frontier.append(key)
            if truncated:
                break
        if found_new:
            rounds += 1
        frontier = next_frontier
    return ExplorationRecord(cliques=sorted(reached), rounds=rounds, truncated=truncated)


def format_components(
    cliques: list[Clique],
    summary: ComponentSummary,
    labels: list[str] | None = None,
) -> str:
    """Render one line per component: its cliques as comma-joined vertex tuples.

    Components appear by id (largest first); cliques within a line are
    space-separated and lexicographically sorted. `labels` maps vertex
    index to display label.
    """

    def fmt(cq: Clique) -> str:
        if labels is None:
            return ",".join(str(v) for v in cq)
        return ",".join(labels[v] for v in cq)

    lines = []
    for group in summary.members():
        lines.append(" ".join(fmt(cliques[i]) for i in sorted(group, key=lambda i: cliques[i])))
    return "\n".join(lines)
