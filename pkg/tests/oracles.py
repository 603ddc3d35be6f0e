"""Brute-force reference implementations for cross-checking the library.

Everything here favors obviousness over speed: k-subset filtering for
cliques, all-bijections matching for copies, pairwise BFS for components,
a dense eigensolver for spectral radii. Only usable at toy sizes.
"""

from itertools import combinations, permutations

import numpy as np


def brute_k_cliques(g, k):
    """All k-cliques by testing every k-subset of vertices."""
    out = []
    for sub in combinations(range(g.n), k):
        if all(g.has_edge(u, v) for u, v in combinations(sub, 2)):
            out.append(sub)
    return out


def brute_oriented_copies(d, spec):
    """Distinct arc-set copies of spec in digraph d, via all role bijections."""
    seen = {}
    for sub in combinations(range(d.n), spec.k):
        for perm in permutations(sub):
            if all(d.has_arc(perm[a], perm[b]) for a, b in spec.arcs):
                image = frozenset((perm[a], perm[b]) for a, b in spec.arcs)
                seen.setdefault(image, tuple(sorted(sub)))
    return sorted(seen.values())


def brute_subgraph_copies(g, motif):
    """Distinct edge-set images of motif in g, via all injections."""
    medges = [
        (u, v)
        for u in range(motif.n)
        for v in motif.neighbors(u)
        if u < v
    ]
    seen = set()
    for sub in combinations(range(g.n), motif.n):
        for perm in permutations(sub):
            if all(g.has_edge(perm[u], perm[v]) for u, v in medges):
                seen.add(frozenset(frozenset((perm[u], perm[v])) for u, v in medges))
    return seen


def shared_at_least(a, b, ell):
    return len(set(a) & set(b)) >= ell


def cross_edges_at_least(g, a, b, ell):
    if set(a) & set(b):
        return False
    count = 0
    for u in a:
        for v in b:
            if g.has_edge(u, v):
                count += 1
    return count >= ell


def brute_partition(count, adjacent):
    """Components of items 0..count-1 under a pairwise predicate, by BFS.

    Returns a set of frozensets of item indices.
    """
    unvisited = set(range(count))
    parts = set()
    while unvisited:
        start = unvisited.pop()
        comp = {start}
        frontier = [start]
        while frontier:
            cur = frontier.pop()
            found = [other for other in unvisited if adjacent(cur, other)]
            for other in found:
                unvisited.discard(other)
                comp.add(other)
                frontier.append(other)
        parts.add(frozenset(comp))
    return parts


def partition_of_summary(summary):
    """ComponentSummary -> set of frozensets of clique indices."""
    groups = {}
    for idx, comp in enumerate(summary.component_of):
        groups.setdefault(comp, set()).add(idx)
    return {frozenset(v) for v in groups.values()}


def dense_spectral_radius(mat):
    """Reference spectral radius via the dense eigensolver."""
    return float(np.max(np.abs(np.linalg.eigvals(np.asarray(mat, dtype=float)))))
