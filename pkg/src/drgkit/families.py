"""Deterministic generators for the test corpus.

Vertices are always enumerated in lexicographic order of their labels, so the
same parameters give byte-identical graph6 output.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import UnsupportedParameters
from .graph import Graph

MAX_VERTICES = 100_000


@dataclass(frozen=True)
class GaloisField:
    """GF(r^2) for a small prime r, as lookup tables.

    Element ``a + b*t`` is stored as the integer ``a + r*b`` where ``t`` is a
    root of a fixed irreducible quadratic.  ``conj`` is the Frobenius map
    ``x -> x**r``.
    """

    r: int
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray
    conj: np.ndarray

    @property
    def order(self) -> int:
        return self.r * self.r

    def subfield(self) -> np.ndarray:
        return np.arange(self.r)


# t^2 = c0 + c1*t
_MODULUS = {2: (1, 1), 3: (2, 0)}


def galois_field(r: int) -> GaloisField:
    if r not in _MODULUS:
        raise UnsupportedParameters(f"GF({r}^2) tables only for r in {sorted(_MODULUS)}")
    c0, c1 = _MODULUS[r]
    q = r * r
    a = np.arange(q) % r
    b = np.arange(q) // r
    add = ((a[:, None] + a[None, :]) % r) + r * ((b[:, None] + b[None, :]) % r)
    # (a1 + b1 t)(a2 + b2 t) = a1a2 + (a1b2 + a2b1) t + b1b2 (c0 + c1 t)
    bb = b[:, None] * b[None, :]
    lo = (a[:, None] * a[None, :] + bb * c0) % r
    hi = (a[:, None] * b[None, :] + b[:, None] * a[None, :] + bb * c1) % r
    mul = lo + r * hi
    neg = ((-a) % r) + r * ((-b) % r)
    inv = np.zeros(q, dtype=np.int64)
    for x in range(1, q):
        inv[x] = int(np.flatnonzero(mul[x] == 1)[0])
    conj = np.zeros(q, dtype=np.int64)
    for x in range(q):
        y = 1
        for _ in range(r):
            y = mul[y, x]
        conj[x] = y
    tables = [np.ascontiguousarray(t, dtype=np.int64) for t in (add, mul, neg, inv, conj)]
    for t in tables:
        t.flags.writeable = False
    return GaloisField(r, *tables)


def gf_matrix_rank(m, field: GaloisField) -> int:
    """Rank over ``field`` by Gaussian elimination on table indices."""
    a = np.array(m, dtype=np.int64, copy=True)
    if a.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if a[i, c] != 0), None)
        if piv is None:
            continue
        a[[rank, piv]] = a[[piv, rank]]
        scale = field.inv[a[rank, c]]
        a[rank] = field.mul[scale, a[rank]]
        for i in range(rows):
            if i != rank and a[i, c] != 0:
                f = field.neg[a[i, c]]
                a[i] = field.add[a[i], field.mul[f, a[rank]]]
        rank += 1
        if rank == rows:
            break
    return rank


# ---------------------------------------------------------------------------
# Hermitian forms graphs
# ---------------------------------------------------------------------------

class HermitianCoordinates:
    """Hermitian d x d matrices over GF(r^2) as vectors in Z_r^(d^2).

    The coordinate order is: diagonal entries (each in GF(r)), then for each
    upper-triangular entry in row-major order its two GF(r) components.  The
    vertex index is the base-r number formed by these digits, most significant
    first, which is the lexicographic order on labels.
    """

    def __init__(self, d: int, field: GaloisField):
        self.d = d
        self.field = field
        self.upper = [(i, j) for i in range(d) for j in range(i + 1, d)]
        self.ndigits = d + 2 * len(self.upper)
        r = field.r
        self.weights = r ** np.arange(self.ndigits - 1, -1, -1, dtype=np.int64)

    @property
    def size(self) -> int:
        return self.field.r ** self.ndigits

    def digits_of(self, mat: np.ndarray) -> np.ndarray:
        r = self.field.r
        out = [int(mat[i, i]) for i in range(self.d)]
        for i, j in self.upper:
            out += [int(mat[i, j]) % r, int(mat[i, j]) // r]
        return np.array(out, dtype=np.int64)

    def matrix_of(self, index: int) -> np.ndarray:
        r = self.field.r
        digs = [(index // int(w)) % r for w in self.weights]
        m = np.zeros((self.d, self.d), dtype=np.int64)
        for i in range(self.d):
            m[i, i] = digs[i]
        for t, (i, j) in enumerate(self.upper):
            x = digs[self.d + 2 * t] + r * digs[self.d + 2 * t + 1]
            m[i, j] = x
            m[j, i] = self.field.conj[x]
        return m


def rank_one_hermitian(d: int, field: GaloisField) -> list[np.ndarray]:
    """All rank-1 Hermitian matrices ``lam * v v^*`` with ``lam`` in GF(r)*."""
    q = field.order
    seen = {}
    for v in itertools.product(range(q), repeat=d):
        if not any(v):
            continue
        v = np.array(v)
        outer = field.mul[v[:, None], field.conj[v][None, :]]
        for lam in range(1, field.r):
            m = field.mul[lam, outer]
            seen.setdefault(m.tobytes(), m)
    mats = [seen[k] for k in sorted(seen)]
    for m in mats:
        assert gf_matrix_rank(m, field) == 1
    return mats


def hermitian_forms_graph(d: int, r: int, method: str = "neighbourhood") -> Graph:
    """Her(d, r): Hermitian d x d matrices over GF(r^2), adjacent iff rank(A-B)=1.

    ``method="neighbourhood"`` adds every rank-1 Hermitian matrix to every
    vertex (a Cayley graph construction); ``method="pairwise"`` tests the rank
    of every difference and is only practical for a few thousand vertices.
    """
    field = galois_field(r)
    coords = HermitianCoordinates(d, field)
    n = coords.size
    if n > MAX_VERTICES:
        raise UnsupportedParameters(f"Her({d},{r}) has {n} vertices (limit {MAX_VERTICES})")
    if method == "neighbourhood":
        gens = np.array([coords.digits_of(m) for m in rank_one_hermitian(d, field)])
        digits = (np.arange(n)[:, None] // coords.weights[None, :]) % r
        digits = digits.astype(np.int8)
        cols = []
        for s in gens.astype(np.int8):
            nb = ((digits + s) % r).astype(np.int64) @ coords.weights
            cols.append(nb)
        nbrs = np.stack(cols, axis=1)
        src = np.repeat(np.arange(n), nbrs.shape[1])
        edges = np.stack([src, nbrs.ravel()], axis=1)
        edges = edges[edges[:, 0] < edges[:, 1]]
        return Graph.from_edges(n, edges)
    if method == "pairwise":
        mats = [coords.matrix_of(i) for i in range(n)]
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                diff = field.add[mats[u], field.neg[mats[v]]]
                if gf_matrix_rank(diff, field) == 1:
                    edges.append((u, v))
        return Graph.from_edges(n, edges)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# classical small families
# ---------------------------------------------------------------------------

def hamming_graph(D: int, q: int) -> Graph:
    n = q ** D
    if n > MAX_VERTICES:
        raise UnsupportedParameters(f"H({D},{q}) too large")
    digits = (np.arange(n)[:, None] // (q ** np.arange(D - 1, -1, -1))[None, :]) % q
    weights = q ** np.arange(D - 1, -1, -1)
    edges = []
    for pos in range(D):
        for delta in range(1, q):
            nd = digits.copy()
            nd[:, pos] = (nd[:, pos] + delta) % q
            nb = nd @ weights
            edges.append(np.stack([np.arange(n), nb], axis=1))
    e = np.concatenate(edges)
    return Graph.from_edges(n, e[e[:, 0] < e[:, 1]])


def hypercube(D: int) -> Graph:
    return hamming_graph(D, 2)


def johnson_graph(n: int, k: int) -> Graph:
    verts = list(itertools.combinations(range(n), k))
    if len(verts) > MAX_VERTICES:
        raise UnsupportedParameters(f"J({n},{k}) too large")
    index = {v: i for i, v in enumerate(verts)}
    edges = []
    for i, v in enumerate(verts):
        sv = set(v)
        for out in v:
            for into in range(n):
                if into in sv:
                    continue
                w = tuple(sorted((sv - {out}) | {into}))
                j = index[w]
                if i < j:
                    edges.append((i, j))
    return Graph.from_edges(len(verts), edges)


def kneser_graph(n: int, k: int) -> Graph:
    verts = list(itertools.combinations(range(n), k))
    edges = [(i, j) for i, j in itertools.combinations(range(len(verts)), 2)
             if not set(verts[i]) & set(verts[j])]
    return Graph.from_edges(len(verts), edges)


def petersen_graph() -> Graph:
    return kneser_graph(5, 2)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise UnsupportedParameters("cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    if n < 1:
        raise UnsupportedParameters("path needs at least 1 vertex")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


# ---------------------------------------------------------------------------
# spec strings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyGraph:
    graph: Graph
    name: str
    params: tuple
    metadata: dict = field(default_factory=dict)


def _expected(name: str, params: tuple) -> dict:
    """Known intersection arrays and classical parameters, as metadata only."""
    if name in ("hypercube", "hamming"):
        D, q = (params[0], 2) if name == "hypercube" else params
        b = [(D - i) * (q - 1) for i in range(D)]
        c = list(range(1, D + 1))
        return {"intersection_array": [b, c], "classical_parameters": [D, 1, 0, q - 1]}
    if name == "johnson":
        n, k = params
        D = min(k, n - k)
        b = [(k - i) * (n - k - i) for i in range(D)]
        c = [i * i for i in range(1, D + 1)]
        meta = {"intersection_array": [b, c]}
        if D >= 3:
            meta["classical_parameters"] = [D, 1, 1, n - D]
        return meta
    if name == "petersen":
        return {"intersection_array": [[3, 2], [1, 1]]}
    if name == "cycle":
        (n,) = params
        D = n // 2
        b = [2] + [1] * (D - 1)
        c = [1] * (D - 1) + [2 if n % 2 == 0 else 1]
        return {"intersection_array": [b, c]}
    if name == "hermitian":
        d, r = params
        return {"classical_parameters": [d, -r, -r - 1, -((-r) ** d + 1)]}
    return {}


_BUILDERS = {
    "hypercube": (hypercube, 1),
    "hamming": (hamming_graph, 2),
    "johnson": (johnson_graph, 2),
    "kneser": (kneser_graph, 2),
    "cycle": (cycle_graph, 1),
    "path": (path_graph, 1),
    "petersen": (petersen_graph, 0),
    "hermitian": (hermitian_forms_graph, 2),
}


def parse_family_spec(spec: str) -> tuple[str, tuple[int, ...]]:
    """``"hermitian:3,2"`` -> ``("hermitian", (3, 2))``; spaces also separate."""
    spec = spec.strip()
    if ":" in spec:
        name, rest = spec.split(":", 1)
    else:
        name, _, rest = spec.partition(" ")
    name = name.strip().lower()
    tokens = [t for t in rest.replace(",", " ").split() if t]
    try:
        params = tuple(int(t) for t in tokens)
    except ValueError:
        raise UnsupportedParameters(f"non-integer parameters in {spec!r}") from None
    return name, params


def gen_family(spec: str) -> FamilyGraph:
    name, params = parse_family_spec(spec)
    if name not in _BUILDERS:
        raise UnsupportedParameters(f"unknown family {name!r}")
    builder, arity = _BUILDERS[name]
    if len(params) != arity:
        raise UnsupportedParameters(f"{name} takes {arity} parameter(s), got {len(params)}")
    if name == "hermitian":
        d, r = params
        if r not in (2, 3) or d not in (2, 3, 4):
            raise UnsupportedParameters("hermitian needs d in {2,3,4} and r in {2,3}")
    if any(p < 0 for p in params):
        raise UnsupportedParameters("parameters must be nonnegative")
    g = builder(*params)
    meta = {"family": name, "params": list(params), "n": g.n, "edges": g.edge_count}
    meta.update(_expected(name, params))
    return FamilyGraph(g, name, params, meta)
