"""Graph representation, distances and external formats.

A :class:`Graph` is an immutable CSR structure: ``indices[indptr[v]:indptr[v+1]]``
is the sorted neighbour list of ``v``.  Everything else in the package consumes
this type.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import (
    Disconnected,
    EmptySubset,
    InvalidCharacter,
    MalformedHeader,
    ParseError,
    SelfLoop,
    TrailingData,
    TruncatedBitVector,
    VertexOutOfRange,
)

UNREACHABLE = kernels.UNREACHABLE

GRAPH6_HEADER = ">>graph6<<"
_GRAPH6_MAX_N = (1 << 36) - 1


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices ``0..n-1`` in CSR form."""

    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "indptr", _frozen(np.asarray(self.indptr, dtype=np.int64)))
        object.__setattr__(self, "indices", _frozen(np.asarray(self.indices, dtype=np.int32)))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build from an iterable or ``(m, 2)`` array of vertex pairs.

        Duplicate edges (in either orientation) are collapsed.  Loops and
        out-of-range endpoints raise ``ValueError``.
        """
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                       dtype=np.int64).reshape(-1, 2)
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        if e.size:
            if e.min() < 0 or e.max() >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise ValueError("self-loops are not allowed")
        both = np.concatenate([e, e[:, ::-1]])
        if both.size:
            key = both[:, 0] * max(n, 1) + both[:, 1]
            key = np.unique(key)
            src, dst = np.divmod(key, max(n, 1))
        else:
            src = dst = np.zeros(0, dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(indptr, dst)

    @property
    def n(self) -> int:
        return self.indptr.shape[0] - 1

    @property
    def edge_count(self) -> int:
        return self.indices.shape[0] // 2

    def adjacency(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.adjacency(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.shape[0] and nb[i] == v)

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges with ``u < v``, in lexicographic order."""
        src = np.repeat(np.arange(self.n), self.degrees())
        keep = src < self.indices
        return np.stack([src[keep], self.indices[keep].astype(np.int64)], axis=1)

    def check(self) -> None:
        """Assert the simple-graph invariants (used by tests)."""
        n = self.n
        assert self.indptr[0] == 0 and np.all(np.diff(self.indptr) >= 0)
        assert self.indptr[-1] == self.indices.shape[0]
        for v in range(n):
            nb = self.adjacency(v)
            assert np.all(np.diff(nb) > 0), f"neighbours of {v} not strictly sorted"
            assert not np.any(nb == v), f"loop at {v}"
            if nb.size:
                assert 0 <= nb.min() and nb.max() < n
        e = self.edges()
        assert 2 * e.shape[0] == self.indices.shape[0], "adjacency not symmetric"
        for u, v in e:
            assert self.has_edge(int(v), int(u))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self):
        return hash((self.n, self.indices.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_count})"


@dataclass(frozen=True, eq=False)
class DistanceRow:
    source: int
    dist: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dist", _frozen(np.asarray(self.dist, dtype=np.int32)))

    def __getitem__(self, v):
        return self.dist[v]

    @property
    def eccentricity(self) -> int:
        return int(self.dist.max())


class VertexSubset:
    """Sorted, duplicate-free set of vertex indices."""

    __slots__ = ("members",)

    def __init__(self, members: Iterable[int] | np.ndarray):
        m = np.unique(np.asarray(list(members) if not isinstance(members, np.ndarray)
                                 else members, dtype=np.int64))
        self.members = _frozen(m)

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "VertexSubset":
        return cls(np.flatnonzero(mask))

    def mask(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=bool)
        out[self.members] = True
        return out

    def __len__(self):
        return self.members.shape[0]

    def __iter__(self):
        return iter(self.members.tolist())

    def __contains__(self, v):
        i = np.searchsorted(self.members, v)
        return bool(i < len(self) and self.members[i] == v)

    def __eq__(self, other):
        if isinstance(other, VertexSubset):
            return np.array_equal(self.members, other.members)
        return NotImplemented

    def __hash__(self):
        return hash(self.members.tobytes())

    def issubset(self, other: "VertexSubset") -> bool:
        return bool(np.isin(self.members, other.members).all())

    def __repr__(self):
        if len(self) <= 12:
            return f"VertexSubset({self.members.tolist()})"
        return f"VertexSubset(<{len(self)} vertices>)"


# ---------------------------------------------------------------------------
# graph6
# ---------------------------------------------------------------------------

def _size_field(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n <= _GRAPH6_MAX_N:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise ValueError("graph6 cannot encode more than 2**36 - 1 vertices")


def write_graph6(g: Graph, header: bool = False) -> str:
    """Canonical graph6 encoding (no trailing newline)."""
    n = g.n
    total = n * (n - 1) // 2
    nbytes = (total + 5) // 6
    body = np.zeros(nbytes, dtype=np.uint8)
    e = g.edges()
    if e.size:
        u, v = e[:, 0], e[:, 1]
        pos = v * (v - 1) // 2 + u
        np.bitwise_or.at(body, pos // 6, (1 << (5 - pos % 6)).astype(np.uint8))
    body += 63
    out = _size_field(n) + body.tobytes()
    text = out.decode("ascii")
    return GRAPH6_HEADER + text if header else text


def _decode_positions(pos: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    j = np.floor((1 + np.sqrt(1 + 8 * pos.astype(np.float64))) / 2).astype(np.int64)
    j[j * (j - 1) // 2 > pos] -= 1
    j[(j + 1) * j // 2 <= pos] += 1
    i = pos - j * (j - 1) // 2
    return i, j


def parse_graph6(text: str | bytes) -> Graph:
    """Decode one graph6 line, with or without the ``>>graph6<<`` header."""
    if isinstance(text, str):
        try:
            data = text.encode("ascii")
        except UnicodeEncodeError as exc:
            raise InvalidCharacter(f"non-ASCII character at offset {exc.start}") from None
    else:
        data = bytes(text)
    if data.endswith(b"\r\n"):
        data = data[:-2]
    elif data.endswith(b"\n"):
        data = data[:-1]
    if data.startswith(GRAPH6_HEADER.encode()):
        data = data[len(GRAPH6_HEADER):]
    if not data:
        raise MalformedHeader("empty graph6 string")
    arr = np.frombuffer(data, dtype=np.uint8)
    bad = np.flatnonzero((arr < 63) | (arr > 126))
    if bad.size:
        raise InvalidCharacter(f"byte {arr[bad[0]]} at offset {bad[0]} is outside 63..126")
    vals = arr.astype(np.int64) - 63
    if vals[0] != 63:
        n, start = int(vals[0]), 1
    elif len(vals) >= 2 and vals[1] == 63:
        if len(vals) < 8:
            raise MalformedHeader("truncated 36-bit size field")
        n = 0
        for x in vals[2:8]:
            n = (n << 6) | int(x)
        start = 8
    else:
        if len(vals) < 4:
            raise MalformedHeader("truncated 18-bit size field")
        n = (int(vals[1]) << 12) | (int(vals[2]) << 6) | int(vals[3])
        start = 4
    total = n * (n - 1) // 2
    need = (total + 5) // 6
    body = vals[start:]
    if body.shape[0] < need:
        raise TruncatedBitVector(f"expected {need} data bytes, found {body.shape[0]}")
    if body.shape[0] > need:
        raise TrailingData(f"{body.shape[0] - need} bytes after the bit vector")
    chunks = []
    step = 1 << 20
    for off in range(0, need, step):
        blk = body[off:off + step].astype(np.uint8)
        bits = np.unpackbits(blk[:, None], axis=1)[:, 2:].ravel()
        chunks.append(np.flatnonzero(bits).astype(np.int64) + 6 * off)
    pos = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    if pos.size and pos[-1] >= total:
        raise TrailingData("nonzero padding bits")
    i, j = _decode_positions(pos)
    return Graph.from_edges(n, np.stack([i, j], axis=1))


# ---------------------------------------------------------------------------
# edge lists
# ---------------------------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines; an optional first line ``n <count>`` fixes the order.

    Blank lines and ``#`` comments are ignored.  Without an ``n`` line the
    vertex count is one more than the largest index seen.
    """
    n: int | None = None
    edges: list[tuple[int, int]] = []
    seen_content = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not seen_content and parts[0] == "n":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(lineno, f"bad vertex-count line {raw!r}")
            n = int(parts[1])
            seen_content = True
            continue
        seen_content = True
        if len(parts) != 2 or not (parts[0].isdigit() and parts[1].isdigit()):
            raise ParseError(lineno, f"expected two nonnegative integers, got {raw!r}")
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise SelfLoop(f"line {lineno}: self-loop at vertex {u}")
        if n is not None and max(u, v) >= n:
            raise VertexOutOfRange(f"line {lineno}: vertex {max(u, v)} >= n={n}")
        edges.append((u, v))
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return Graph.from_edges(n, edges)


def write_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.edges().tolist()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

def bfs_distances(g: Graph, source: int) -> DistanceRow:
    if not 0 <= source < g.n:
        raise IndexError(f"source {source} out of range")
    return DistanceRow(source, kernels.bfs(g.indptr, g.indices, source))


def all_distances(g: Graph, sources: Sequence[int] | None = None) -> np.ndarray:
    """Distance rows for ``sources`` (default: every vertex) as an int32 matrix."""
    src = np.arange(g.n, dtype=np.int64) if sources is None else np.asarray(sources, dtype=np.int64)
    if src.size == 0:
        return np.zeros((0, g.n), dtype=np.int32)
    return kernels.multi_bfs(g.indptr, g.indices, src)


def distance_partition(g: Graph, x: int) -> list[VertexSubset]:
    d = bfs_distances(g, x).dist
    miss = np.flatnonzero(d == UNREACHABLE)
    if miss.size:
        raise Disconnected(x, int(miss[0]))
    order = np.argsort(d, kind="stable")
    bounds = np.searchsorted(d[order], np.arange(d.max() + 2))
    return [VertexSubset(order[bounds[i]:bounds[i + 1]]) for i in range(d.max() + 1)]


def induced_subgraph(g: Graph, s: VertexSubset | Iterable[int]) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on ``s`` and the map from new to original indices."""
    if not isinstance(s, VertexSubset):
        s = VertexSubset(s)
    if len(s) == 0:
        raise EmptySubset("induced subgraph of an empty vertex set")
    verts = s.members
    relabel = np.full(g.n, -1, dtype=np.int64)
    relabel[verts] = np.arange(verts.shape[0])
    e = g.edges()
    keep = (relabel[e[:, 0]] >= 0) & (relabel[e[:, 1]] >= 0)
    sub = Graph.from_edges(verts.shape[0], relabel[e[keep]])
    return sub, verts.copy()


def diameter_and_regularity(g: Graph) -> tuple[int, int | None]:
    """Exact diameter (all-sources BFS) and the valency if the graph is regular."""
    if g.n == 0:
        raise ValueError("empty graph")
    diam = 0
    block = max(1, min(g.n, (1 << 24) // max(g.n, 1)))
    for start in range(0, g.n, block):
        rows = all_distances(g, range(start, min(g.n, start + block)))
        bad = np.argwhere(rows == UNREACHABLE)
        if bad.size:
            raise Disconnected(start + int(bad[0, 0]), int(bad[0, 1]))
        diam = max(diam, int(rows.max()))
    deg = g.degrees()
    k = int(deg[0]) if np.all(deg == deg[0]) else None
    return diam, k


class DistanceOracle:
    """Distance rows on demand.

    Small graphs get one all-pairs matrix; large ones keep an LRU cache of BFS
    rows bounded by ``max_bytes``.  An oracle is scratch space for one caller
    and is not meant to be shared across threads.
    """

    def __init__(self, g: Graph, dense_threshold: int = 4096, max_bytes: int = 384 << 20):
        self.g = g
        self.dense = g.n <= dense_threshold
        self._matrix: np.ndarray | None = None
        self._cache: OrderedDict[int, np.ndarray] = OrderedDict()
        self._max_rows = max(16, max_bytes // max(4 * g.n, 1))
        self.bfs_calls = 0

    def matrix(self) -> np.ndarray:
        if not self.dense:
            raise MemoryError("all-pairs matrix disabled for large graphs")
        if self._matrix is None:
            self._matrix = all_distances(self.g)
            self._matrix.flags.writeable = False
            self.bfs_calls += self.g.n
        return self._matrix

    def row(self, v: int) -> np.ndarray:
        v = int(v)
        if self.dense:
            return self.matrix()[v]
        r = self._cache.get(v)
        if r is not None:
            self._cache.move_to_end(v)
            return r
        r = kernels.bfs(self.g.indptr, self.g.indices, v)
        r.flags.writeable = False
        self.bfs_calls += 1
        self._cache[v] = r
        if len(self._cache) > self._max_rows:
            self._cache.popitem(last=False)
        return r

    def rows(self, vs: Sequence[int] | np.ndarray) -> np.ndarray:
        vs = np.asarray(vs, dtype=np.int64)
        if self.dense:
            return self.matrix()[vs]
        out = np.empty((vs.shape[0], self.g.n), dtype=np.int32)
        for t, v in enumerate(vs):
            out[t] = self.row(int(v))
        return out

    def dist(self, u: int, v: int) -> int:
        return int(self.row(u)[v])
