"""Enumeration of k-cliques, oriented pattern copies, and small motifs.

Cliques are plain sorted vertex tuples. Enumeration processes vertices in
degeneracy order and extends partial cliques only with common neighbors
that come later in that order, so each clique is produced exactly once
and the search depth stays bounded by the peel degree, which is what
makes the sparse near-threshold regime cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

from .errors import InvalidParameterError, UnsupportedParameterError
from .graphs import DirectedGraph, UndirectedGraph

Clique = tuple[int, ...]


def degeneracy_order(g: UndirectedGraph) -> list[int]:
    """Vertex removal order of the repeated minimum-degree peel.

    Every vertex has at most degeneracy(g) neighbors later in the order.
    Bucket queue implementation, O(n + m).
    """
    n = g.n
    if n == 0:
        return []
    indptr = g.indptr.tolist()
    adj = g.adj.tolist()
    deg = [indptr[v + 1] - indptr[v] for v in range(n)]
    maxd = max(deg)
    count = [0] * (maxd + 1)
    for d in deg:
        count[d] += 1
    # bstart[d] = current start position of the degree-d bucket in vert
    bstart = [0] * (maxd + 1)
    s = 0
    for d in range(maxd + 1):
        bstart[d] = s
        s += count[d]
    fill = bstart.copy()
    vert = [0] * n
    pos = [0] * n
    for v in range(n):
        d = deg[v]
        pos[v] = fill[d]
        vert[fill[d]] = v
        fill[d] += 1
    for i in range(n):
        v = vert[i]
        dv = deg[v]
        for w in adj[indptr[v] : indptr[v + 1]]:
            dw = deg[w]
            # recorded degrees of popped vertices never exceed dv, so this
            # only ever touches unprocessed vertices
            if dw > dv:
                s0 = bstart[dw]
                u = vert[s0]
                if u != w:
                    pw = pos[w]
                    vert[s0] = w
                    vert[pw] = u
                    pos[w] = s0
                    pos[u] = pw
                bstart[dw] = s0 + 1
                deg[w] = dw - 1
    return vert


def _forward_sets(g: UndirectedGraph, order: list[int]) -> list[set[int]]:
    """Neighbor sets restricted to vertices later in the peel order."""
    n = g.n
    rank = np.empty(n, dtype=np.int64)
    rank[np.asarray(order, dtype=np.int64)] = np.arange(n, dtype=np.int64)
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(g.indptr))
    dst = g.adj.astype(np.int64, copy=False)
    keep = rank[dst] > rank[src]
    fsrc = src[keep]
    fdst = dst[keep]
    counts = np.bincount(fsrc, minlength=n)
    bounds = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=bounds[1:])
    flat = fdst.tolist()
    lo = bounds.tolist()
    return [set(flat[lo[v] : lo[v + 1]]) for v in range(n)]


def enumerate_k_cliques(g: UndirectedGraph, k: int) -> list[Clique]:
    """All k-cliques of g as sorted vertex tuples, in lexicographic order.

    k larger than n simply yields an empty list.
    """
    if k < 1:
        raise InvalidParameterError("k must be >= 1")
    if k == 1:
        return [(v,) for v in range(g.n)]
    order = degeneracy_order(g)
    fwd = _forward_sets(g, order)
    out: list[Clique] = []
    emit = out.append
    if k == 2:
        for v in range(g.n):
            for w in fwd[v]:
                emit((v, w) if v < w else (w, v))
    elif k == 3:
        for v in range(g.n):
            fv = fwd[v]
            if len(fv) < 2:
                continue
            for u in fv:
                for w in fv & fwd[u]:
                    a, b, c = sorted((v, u, w))
                    emit((a, b, c))
    else:

        def extend(base: tuple[int, ...], cand: set[int]) -> None:
            want = k - len(base)
            if want == 1:
                for w in cand:
                    emit(tuple(sorted(base + (w,))))
                return
            for w in cand:
                nxt = cand & fwd[w]
                if len(nxt) >= want - 1:
                    extend(base + (w,), nxt)

        for v in range(g.n):
            if len(fwd[v]) >= k - 1:
                extend((v,), fwd[v])
    out.sort()
    return out


@dataclass(frozen=True)
class OrientationSpec:
    """A tournament on roles 0..k-1: exactly one arc per role pair.

    automorphism_count is the number of role permutations preserving
    the arc set.
    """

    k: int
    arcs: frozenset[tuple[int, int]]
    automorphism_count: int

    @classmethod
    def from_arcs(cls, k: int, arcs) -> "OrientationSpec":
        arcs = frozenset((int(a), int(b)) for a, b in arcs)
        _validate_tournament(k, arcs)
        if k > 8:
            raise UnsupportedParameterError("automorphism counting limited to k <= 8")
        autos = sum(
            1
            for perm in permutations(range(k))
            if all((perm[i], perm[j]) in arcs for i, j in arcs)
        )
        return cls(k=k, arcs=arcs, automorphism_count=autos)


def _validate_tournament(k: int, arcs: frozenset[tuple[int, int]]) -> None:
    if k < 2:
        raise InvalidParameterError("orientation needs k >= 2 roles")
    for i, j in arcs:
        if not (0 <= i < k and 0 <= j < k) or i == j:
            raise InvalidParameterError("arc endpoints must be distinct roles in range")
    for i in range(k):
        for j in range(i + 1, k):
            fwd_arc = (i, j) in arcs
            rev = (j, i) in arcs
            if fwd_arc == rev:
                raise InvalidParameterError(
                    "orientation must pick exactly one direction per role pair"
                )


def build_orientation_k_transitive(k: int) -> OrientationSpec:
    """Transitive tournament on k roles: i beats j whenever i < j.

    The out-degree sequence k-1, k-2, ..., 0 pins every role, so the
    identity is the only automorphism.
    """
    if k < 2:
        raise InvalidParameterError("orientation needs k >= 2 roles")
    arcs = frozenset((i, j) for i in range(k) for j in range(i + 1, k))
    return OrientationSpec(k=k, arcs=arcs, automorphism_count=1)


def build_orientation_k4_mixed() -> OrientationSpec:
    """The 4-role tournament whose triangles split into both kinds.

    Score sequence (1, 1, 2, 2): two of the four triangles are cyclic and
    two are transitive, so extension counts genuinely depend on which
    triangle a new vertex lands on. This is the smallest orientation whose
    overlap process is multi-type. Roles are labeled so that, listing the
    3-subsets in lexicographic order, the cyclic triangles come first.
    """
    arcs = frozenset({(3, 2), (3, 1), (2, 1), (1, 0), (0, 3), (0, 2)})
    return OrientationSpec.from_arcs(4, arcs)


@dataclass(frozen=True, eq=False)
class OrientedCopy:
    """One placed copy of an orientation: role_map[r] is the vertex in role r.

    Identity is the realized arc set; two copies with the same arcs are the
    same copy even if recorded through different role maps.
    """

    vertices: tuple[int, ...]
    arcs: frozenset[tuple[int, int]]
    role_map: tuple[int, ...]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, OrientedCopy) and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash(self.arcs)


def enumerate_oriented_copies(d: DirectedGraph, spec: OrientationSpec) -> list[OrientedCopy]:
    """All copies of the oriented pattern in d, one per distinct arc set.

    First finds vertex k-sets whose underlying simple graph is complete,
    then checks every role bijection on each k-set. Doubled arcs can
    realize several copies on the same vertex set; those are kept apart
    because their arc sets differ.
    """
    if spec.k > 8:
        raise UnsupportedParameterError("oriented enumeration limited to k <= 8")
    und = d.underlying_undirected()
    ksets = enumerate_k_cliques(und, spec.k)
    arcs_of = d.arc_set
    pattern = sorted(spec.arcs)
    out: list[OrientedCopy] = []
    seen: set[frozenset[tuple[int, int]]] = set()
    for ks in ksets:
        for perm in permutations(ks):
            image = []
            ok = True
            for i, j in pattern:
                a = (perm[i], perm[j])
                if a not in arcs_of:
                    ok = False
                    break
                image.append(a)
            if ok:
                key = frozenset(image)
                if key not in seen:
                    seen.add(key)
                    out.append(OrientedCopy(vertices=ks, arcs=key, role_map=perm))
    out.sort(key=lambda c: (c.vertices, sorted(c.arcs)))
    return out


@dataclass(frozen=True)
class SubgraphCopy:
    """A copy of an undirected motif: sorted vertex tuple plus image edge set."""

    vertices: tuple[int, ...]
    edges: frozenset[tuple[int, int]]


def _motif_search_order(motif: UndirectedGraph) -> list[tuple[int, list[int]]]:
    """BFS order over motif roles with, per role, its already-placed neighbors."""
    n = motif.n
    seen = [False] * n
    order: list[tuple[int, list[int]]] = []
    queue = [0]
    seen[0] = True
    placed: list[int] = []
    while queue:
        r = queue.pop(0)
        anchors = [a for a in placed if motif.has_edge(a, r)]
        order.append((r, anchors))
        placed.append(r)
        for w in motif.neighbors(r):
            w = int(w)
            if not seen[w]:
                seen[w] = True
                queue.append(w)
    if len(order) != n:
        raise InvalidParameterError("motif must be connected")
    return order


def enumerate_subgraph_copies(g: UndirectedGraph, motif: UndirectedGraph) -> list[SubgraphCopy]:
    """Copies of a small connected motif in g, one per distinct image edge set.

    Copies are not required to be induced: only the motif's edges must be
    present. Deduplication by image edge set means each copy is counted
    once regardless of the motif's automorphisms.
    """
    h = motif.n
    if h < 1 or h > 8:
        raise UnsupportedParameterError("motif order must be between 1 and 8")
    if h == 1:
        return [SubgraphCopy(vertices=(v,), edges=frozenset()) for v in range(g.n)]
    roles = _motif_search_order(motif)
    motif_edges = [
        (i, int(j)) for i in range(h) for j in motif.neighbors(i) if i < j
    ]
    nbr = g.adjacency_sets
    found: dict[frozenset[tuple[int, int]], tuple[int, ...]] = {}
    image = [0] * h
    used: set[int] = set()

    def place(t: int) -> None:
        if t == h:
            edges = frozenset(
                (image[a], image[b]) if image[a] < image[b] else (image[b], image[a])
                for a, b in motif_edges
            )
            if edges not in found:
                found[edges] = tuple(sorted(image))
            return
        role, anchors = roles[t]
        cand = nbr[image[anchors[0]]]
        for a in anchors[1:]:
            cand = cand & nbr[image[a]]
        for v in sorted(cand - used):
            image[role] = v
            used.add(v)
            place(t + 1)
            used.discard(v)

    role0 = roles[0][0]
    for v in range(g.n):
        image[role0] = v
        used.add(v)
        place(1)
        used.discard(v)
    copies = [SubgraphCopy(vertices=verts, edges=edges) for edges, verts in found.items()]
    copies.sort(key=lambda c: (c.vertices, sorted(c.edges)))
    return copies
