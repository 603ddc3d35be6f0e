"""Graph containers and sparse random-graph generation.

Graphs are immutable after construction and stored in compressed
adjacency form (one int32 neighbor array plus int64 offsets), so a
sparse graph on 10^5 vertices costs megabytes, not gigabytes.

Random graphs are sampled by geometric gap-skipping over the linearized
pair index: for edge probability p the gaps between present pairs are
iid Geometric(p), so only the expected p * C(n, 2) present pairs are ever
touched. Streams come from numpy's Philox counter-based generator keyed
by a 64-bit seed; per-trial seeds are derived from a master seed with a
SplitMix64 step (see split_seed). The generator name and version are
exposed as RNG_ALGORITHM so result files can pin them.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .errors import InvalidParameterError, ParseError

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15  # odd increment, so the stream position is injective

RNG_ALGORITHM = f"philox4x64 (numpy {np.__version__}) + splitmix64 seed splitting"


def split_seed(master_seed: int, index: int) -> int:
    """Derive the index-th child seed from a 64-bit master seed.

    One SplitMix64 step: state = master + (index+1)*gamma mod 2^64, then the
    bijective finalizer. Distinct indexes give distinct child seeds for any
    fixed master because both maps are injective in the index.
    """
    if index < 0:
        raise InvalidParameterError("seed index must be >= 0")
    x = (master_seed + (index + 1) * _GAMMA) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed & _MASK64))


def _sample_indices(total: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Sorted indices of present items among range(total), each present iid w.p. p."""
    if total == 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    out = []
    batch = max(1024, int(total * p * 1.1) + 16)
    last = -1
    while True:
        gaps = rng.geometric(p, size=batch).astype(np.int64, copy=False)
        pos = last + np.cumsum(gaps)
        keep = pos[pos < total]
        out.append(keep)
        if keep.size < pos.size:
            break
        last = int(pos[-1])
    return np.concatenate(out)


def _decode_pair_index(m: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of the row-major linearization of pairs (i, j), i < j < n.

    index(i, j) = i*(2n - i - 1)/2 + (j - i - 1). The float solve for i can be
    off by a step at large n, so it is corrected with exact integer offsets.
    """
    m = m.astype(np.int64, copy=False)
    b = 2 * n - 1
    disc = b * b - 8 * m
    i = ((b - np.sqrt(disc.astype(np.float64))) / 2.0).astype(np.int64)
    np.clip(i, 0, n - 2, out=i)

    def offset(i_arr: np.ndarray) -> np.ndarray:
        return i_arr * (2 * n - i_arr - 1) // 2

    while True:
        too_high = offset(i) > m
        if not too_high.any():
            break
        i[too_high] -= 1
    while True:
        too_low = (i < n - 2) & (offset(i + 1) <= m)
        if not too_low.any():
            break
        i[too_low] += 1
    j = i + 1 + (m - offset(i))
    return i, j


def _build_csr(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Dedup (src, dst) pairs and pack them as (indptr, sorted neighbor array)."""
    if n == 0:
        indptr = np.zeros(1, dtype=np.int64)
        adj = np.empty(0, dtype=np.int32)
        indptr.setflags(write=False)
        return indptr, adj
    codes = np.unique(src.astype(np.int64) * n + dst.astype(np.int64))
    src_u = codes // n
    dst_u = codes % n
    counts = np.bincount(src_u, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    adj = dst_u.astype(np.int32)
    indptr.setflags(write=False)
    adj.setflags(write=False)
    return indptr, adj


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple undirected graph on vertices 0..n-1, no self-loops.

    indptr/adj form: neighbors of v are adj[indptr[v]:indptr[v+1]], sorted.
    """

    n: int
    indptr: np.ndarray
    adj: np.ndarray

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "UndirectedGraph":
        if n < 0:
            raise InvalidParameterError("vertex count must be >= 0")
        arr = np.asarray(list(edges), dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        u, v = arr[:, 0], arr[:, 1]
        if arr.size and (u.min() < 0 or v.min() < 0 or u.max() >= n or v.max() >= n):
            raise InvalidParameterError("edge endpoint out of range")
        if (u == v).any():
            raise InvalidParameterError("self-loops are not allowed")
        indptr, adj = _build_csr(n, np.concatenate([u, v]), np.concatenate([v, u]))
        return cls(n=n, indptr=indptr, adj=adj)

    @property
    def edge_count(self) -> int:
        return int(self.adj.size) // 2

    def neighbors(self, v: int) -> np.ndarray:
        return self.adj[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        pos = np.searchsorted(row, v)
        return bool(pos < row.size and row[pos] == v)

    @cached_property
    def adjacency_sets(self) -> list[set[int]]:
        """Per-vertex neighbor sets (python ints); built once and cached."""
        indptr = self.indptr.tolist()
        flat = self.adj.tolist()
        return [set(flat[indptr[v] : indptr[v + 1]]) for v in range(self.n)]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)


@dataclass(frozen=True)
class DirectedGraph:
    """Directed graph on vertices 0..n-1; u->v and v->u may both be present."""

    n: int
    out_indptr: np.ndarray
    out_adj: np.ndarray
    in_indptr: np.ndarray
    in_adj: np.ndarray

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "DirectedGraph":
        if n < 0:
            raise InvalidParameterError("vertex count must be >= 0")
        arr = np.asarray(list(arcs), dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        u, v = arr[:, 0], arr[:, 1]
        if arr.size and (u.min() < 0 or v.min() < 0 or u.max() >= n or v.max() >= n):
            raise InvalidParameterError("arc endpoint out of range")
        if (u == v).any():
            raise InvalidParameterError("self-loops are not allowed")
        out_indptr, out_adj = _build_csr(n, u, v)
        in_indptr, in_adj = _build_csr(n, v, u)
        return cls(n=n, out_indptr=out_indptr, out_adj=out_adj,
                   in_indptr=in_indptr, in_adj=in_adj)

    @property
    def arc_count(self) -> int:
        return int(self.out_adj.size)

    def out_neighbors(self, v: int) -> np.ndarray:
        return self.out_adj[self.out_indptr[v] : self.out_indptr[v + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        return self.in_adj[self.in_indptr[v] : self.in_indptr[v + 1]]

    def has_arc(self, u: int, v: int) -> bool:
        row = self.out_neighbors(u)
        pos = np.searchsorted(row, v)
        return bool(pos < row.size and row[pos] == v)

    @cached_property
    def arc_set(self) -> set[tuple[int, int]]:
        """All arcs as (tail, head) python-int tuples; built once and cached."""
        out = set()
        indptr = self.out_indptr.tolist()
        flat = self.out_adj.tolist()
        for u in range(self.n):
            for w in flat[indptr[u] : indptr[u + 1]]:
                out.add((u, w))
        return out

    def underlying_undirected(self) -> UndirectedGraph:
        """Forget directions; doubled arcs collapse to one edge."""
        src, dst = [], []
        indptr = self.out_indptr
        for u in range(self.n):
            row = self.out_adj[indptr[u] : indptr[u + 1]]
            src.append(np.full(row.size, u, dtype=np.int64))
            dst.append(row.astype(np.int64))
        if src:
            u_all = np.concatenate(src)
            v_all = np.concatenate(dst)
        else:
            u_all = v_all = np.empty(0, dtype=np.int64)
        ip, adj = _build_csr(self.n, np.concatenate([u_all, v_all]),
                             np.concatenate([v_all, u_all]))
        return UndirectedGraph(n=self.n, indptr=ip, adj=adj)


def gen_gnp(n: int, p: float, seed: int) -> UndirectedGraph:
    """Erdos-Renyi G(n, p): each of the C(n, 2) pairs is an edge iid w.p. p.

    Deterministic in (n, p, seed). Runs in time proportional to the number
    of edges drawn, not to C(n, 2).
    """
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    if not (0.0 <= p <= 1.0):
        raise InvalidParameterError("p must be in [0, 1]")
    total = n * (n - 1) // 2
    idx = _sample_indices(total, p, _rng(seed))
    i, j = _decode_pair_index(idx, n) if idx.size else (idx, idx)
    indptr, adj = _build_csr(n, np.concatenate([i, j]), np.concatenate([j, i]))
    return UndirectedGraph(n=n, indptr=indptr, adj=adj)


def gen_directed_gnp(n: int, p: float, seed: int) -> DirectedGraph:
    """Directed G(n, p): each of the n(n-1) ordered pairs is an arc iid w.p. p.

    The two orientations of a pair are independent, so doubled arcs occur.
    """
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    if not (0.0 <= p <= 1.0):
        raise InvalidParameterError("p must be in [0, 1]")
    total = n * (n - 1)
    idx = _sample_indices(total, p, _rng(seed))
    if idx.size:
        u = idx // (n - 1)
        r = idx % (n - 1)
        v = r + (r >= u)
    else:
        u = v = idx
    out_indptr, out_adj = _build_csr(n, u, v)
    in_indptr, in_adj = _build_csr(n, v, u)
    return DirectedGraph(n=n, out_indptr=out_indptr, out_adj=out_adj,
                         in_indptr=in_indptr, in_adj=in_adj)


def load_edge_list(source: str | Path | IO[str]) -> tuple[UndirectedGraph, dict[str, int]]:
    """Read a whitespace-separated edge list; returns (graph, label->index map).

    Lines starting with '#' and blank lines are skipped. Labels are assigned
    indices in order of first appearance (both endpoints of a line count,
    including self-loop lines). Self-loop edges are dropped; duplicate edges
    collapse to one. Any other malformed line raises ParseError with its
    1-based line number.
    """
    if isinstance(source, (str, Path)):
        with io.open(source, "r", encoding="utf-8") as fh:
            return load_edge_list(fh)
    labels: dict[str, int] = {}
    edges: set[tuple[int, int]] = set()
    for ln, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"line {ln}: expected two tokens, got {len(tokens)}")
        a, b = tokens
        ia = labels.setdefault(a, len(labels))
        ib = labels.setdefault(b, len(labels))
        if ia == ib:
            continue
        edges.add((min(ia, ib), max(ia, ib)))
    graph = UndirectedGraph.from_edges(len(labels), sorted(edges))
    return graph, labels


def complete_graph(n: int) -> UndirectedGraph:
    return UndirectedGraph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> UndirectedGraph:
    if n < 3:
        raise InvalidParameterError("cycle needs >= 3 vertices")
    return UndirectedGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_bipartite_graph(r: int, s: int) -> UndirectedGraph:
    return UndirectedGraph.from_edges(r + s, [(i, r + j) for i in range(r) for j in range(s)])
