"""Weak-geodetic closures, parallelograms, pentagons and the distance-3
closed subgraph construction.

Throughout, distances come from a :class:`~drgkit.graph.DistanceOracle`, so a
caller that runs many checks on the same graph can pass one oracle around and
reuse its BFS rows.  On large graphs only the rows that a construction
actually touches are ever computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .classical import fit_classical_parameters
from .drg import DRGCertificate, hypothesis_gate
from .errors import (
    CertificationFailed,
    DenseLimitExceeded,
    HypothesisViolated,
    NotRegular,
)
from .graph import (
    DistanceOracle,
    DistanceRow,
    Graph,
    UNREACHABLE,
    VertexSubset,
    diameter_and_regularity,
    induced_subgraph,
)

FULL_CHECK_LIMIT = 2000


def _oracle(g: Graph, oracle: DistanceOracle | None) -> DistanceOracle:
    return oracle if oracle is not None else DistanceOracle(g)


def _subset(s) -> VertexSubset:
    return s if isinstance(s, VertexSubset) else VertexSubset(s)


def _gather(g: Graph, verts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(owner, neighbour) for every edge leaving ``verts``."""
    verts = np.asarray(verts, dtype=np.int64)
    starts = g.indptr[verts]
    counts = g.indptr[verts + 1] - starts
    total = int(counts.sum())
    owner = np.repeat(verts, counts)
    pos = np.repeat(starts - np.cumsum(counts) + counts, counts) + np.arange(total)
    return owner, g.indices[pos].astype(np.int64)


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Parallelogram:
    x: int
    y: int
    z: int
    w: int
    length: int

    def astuple(self) -> tuple[int, int, int, int]:
        return (self.x, self.y, self.z, self.w)


@dataclass(frozen=True)
class Pentagon:
    vertices: tuple[int, int, int, int, int]


@dataclass(frozen=True, eq=False)
class ClosedSubgraphCertificate:
    members: VertexSubset
    diameter: int | None
    valency: int | None
    closed: bool
    closed_wrt: tuple[int, ...]
    construction: str
    closure_path: str = "full"
    trace: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.members)

    def to_json(self, with_members: bool = False) -> dict:
        out = {"size": self.size, "diameter": self.diameter, "valency": self.valency,
               "closed": self.closed, "closed_wrt_count": len(self.closed_wrt),
               "construction": self.construction, "closure_path": self.closure_path}
        if with_members:
            out["members"] = self.members.members.tolist()
        out.update({k: v for k, v in self.trace.items() if k != "C"})
        return out


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------

def is_weak_geodetic(dx: DistanceRow, dz: DistanceRow, y: int) -> bool:
    """d(x,y) + d(y,z) <= d(x,z) + 1 for x = dx.source, z = dz.source."""
    a, b, c = int(dx.dist[y]), int(dz.dist[y]), int(dx.dist[dz.source])
    if UNREACHABLE in (a, b, c):
        return False
    return a + b <= c + 1


def is_closed_wrt(g: Graph, omega, x: int, oracle: DistanceOracle | None = None
                  ) -> tuple[bool, tuple[int, int] | None]:
    """Whether C(z,x) and A(z,x) lie in ``omega`` for every member z.

    Returns ``(ok, violation)`` where ``violation`` is the first
    ``(z, neighbour)`` found outside ``omega``.
    """
    omega = _subset(omega)
    if x not in omega:
        raise ValueError(f"{x} is not a member")
    dx = _oracle(g, oracle).row(x)
    mask = omega.mask(g.n)
    owner, nb = _gather(g, omega.members)
    dz = dx[owner]
    bad = (dz != UNREACHABLE) & (dx[nb] <= dz) & ~mask[nb]
    if bad.any():
        t = int(np.flatnonzero(bad)[0])
        return False, (int(owner[t]), int(nb[t]))
    return True, None


def closed_wrt_members(g: Graph, omega, oracle: DistanceOracle | None = None,
                       stop_early: bool = False) -> list[int]:
    omega = _subset(omega)
    oracle = _oracle(g, oracle)
    ok = []
    for x in omega:
        if is_closed_wrt(g, omega, x, oracle)[0]:
            ok.append(x)
        elif stop_early:
            break
    return ok


def is_weak_geodetically_closed(g: Graph, omega, oracle: DistanceOracle | None = None) -> bool:
    omega = _subset(omega)
    if len(omega) == 0:
        raise ValueError("empty vertex set")
    return len(closed_wrt_members(g, omega, oracle, stop_early=True)) == len(omega)


# ---------------------------------------------------------------------------
# certificates for arbitrary subsets
# ---------------------------------------------------------------------------

def _shape(g: Graph, omega: VertexSubset) -> tuple[int | None, int | None]:
    sub, _ = induced_subgraph(g, omega)
    try:
        diam, k = diameter_and_regularity(sub)
    except Exception:  # disconnected induced subgraph
        deg = sub.degrees()
        return None, (int(deg[0]) if np.all(deg == deg[0]) else None)
    return diam, k


def certify_subgraph(g: Graph, omega, construction: str, oracle: DistanceOracle | None = None,
                     full_limit: int = FULL_CHECK_LIMIT, cache: dict | None = None,
                     trace: dict | None = None) -> ClosedSubgraphCertificate:
    """Closedness, diameter and valency of ``omega``.

    Up to ``full_limit`` members closedness is checked with respect to every
    member.  Above it only the first member is checked, and ``closed`` is set
    when that check passes and the induced subgraph is regular: the closedness
    criterion for regular subgraphs then gives the rest.  ``cache`` (keyed by
    the member set) skips repeated verification of the same set.
    """
    omega = _subset(omega)
    oracle = _oracle(g, oracle)
    key = omega.members.tobytes()
    if cache is not None and key in cache:
        diam, k, closed, wrt, path = cache[key]
    else:
        diam, k = _shape(g, omega)
        if len(omega) <= full_limit:
            wrt = tuple(closed_wrt_members(g, omega, oracle))
            closed = len(wrt) == len(omega)
            path = "full"
        else:
            x0 = int(omega.members[0])
            ok = is_closed_wrt(g, omega, x0, oracle)[0]
            wrt = (x0,) if ok else ()
            closed = ok and k is not None
            path = "regular-plus-closed-wrt-one"
        if cache is not None:
            cache[key] = (diam, k, closed, wrt, path)
    return ClosedSubgraphCertificate(omega, diam, k, closed, wrt, construction, path,
                                     dict(trace or {}))


def weak_geodetic_closure(g: Graph, seed, oracle: DistanceOracle | None = None,
                          max_size: int | None = None, certify: bool = True,
                          cache: dict | None = None):
    """Least weak-geodetically closed superset of ``seed``.

    Each round adds every y with d(x,y) + d(y,z) <= d(x,z) + 1 for members
    x, z where at least one of them joined in the previous round.
    Returns a :class:`ClosedSubgraphCertificate` (or just the
    :class:`VertexSubset` if ``certify=False``).
    """
    seed = _subset(seed)
    if len(seed) == 0:
        raise ValueError("empty seed")
    oracle = _oracle(g, oracle)
    members = seed.members.astype(np.int64)
    mask = seed.mask(g.n)
    rows = oracle.rows(members)
    new_pos = np.arange(members.shape[0], dtype=np.int64)
    rounds = 0
    while new_pos.size:
        rounds += 1
        hit = kernels.closure_round(rows, members, new_pos) & ~mask
        fresh = np.flatnonzero(hit)
        if not fresh.size:
            break
        if max_size is not None and members.shape[0] + fresh.size > max_size:
            raise CertificationFailed("closure exceeded max_size",
                                      {"size": int(members.shape[0] + fresh.size)})
        mask[fresh] = True
        new_pos = np.arange(members.shape[0], members.shape[0] + fresh.size, dtype=np.int64)
        members = np.concatenate([members, fresh])
        rows = np.concatenate([rows, oracle.rows(fresh)])
    result = VertexSubset(members)
    if not certify:
        return result
    return certify_subgraph(g, result, "closure-fixed-point", oracle, cache=cache,
                            trace={"rounds": rounds})


# ---------------------------------------------------------------------------
# parallelograms and pentagons
# ---------------------------------------------------------------------------

def find_parallelograms(g: Graph, length: int, cert: DRGCertificate | None = None,
                        first_only: bool = False, oracle: DistanceOracle | None = None
                        ) -> list[Parallelogram]:
    """All 4-tuples xyzw with d(x,y) = d(z,w) = 1, d(x,z) = length and
    d(x,w) = d(y,w) = d(y,z) = length - 1."""
    if length < 2:
        raise ValueError("length must be at least 2")
    if cert is not None and length > cert.D:
        return []
    oracle = _oracle(g, oracle)
    if not oracle.dense:
        raise DenseLimitExceeded("parallelogram scan needs the all-pairs matrix")
    dmat = oracle.matrix()
    found = kernels.parallelograms(g.indptr, g.indices, dmat, int(length), bool(first_only))
    return [Parallelogram(int(a), int(b), int(c), int(d), length) for a, b, c, d in found]


def find_pentagons_constrained(g: Graph, x: int, pattern: Sequence[int | None],
                               oracle: DistanceOracle | None = None,
                               limit: int | None = None) -> list[Pentagon]:
    """Pentagons x1..x5 (distinct vertices, consecutive ones adjacent, x5 ~ x1)
    with d(x, x_p) = pattern[p] wherever the pattern entry is not ``None``."""
    if len(pattern) != 5:
        raise ValueError("pattern needs five entries")
    dx = _oracle(g, oracle).row(x)
    allowed = [np.ones(g.n, dtype=bool) if p is None else dx == p for p in pattern]
    out: list[Pentagon] = []
    for v1 in np.flatnonzero(allowed[0]).tolist():
        n1 = g.adjacency(v1)
        for v2 in n1[allowed[1][n1]].tolist():
            n2 = g.adjacency(v2)
            for v3 in n2[allowed[2][n2]].tolist():
                if v3 == v1:
                    continue
                n3 = g.adjacency(v3)
                for v4 in n3[allowed[3][n3]].tolist():
                    if v4 in (v1, v2):
                        continue
                    cand = np.intersect1d(g.adjacency(v4), n1, assume_unique=True)
                    for v5 in cand[allowed[4][cand]].tolist():
                        if v5 in (v1, v2, v3):
                            continue
                        out.append(Pentagon((v1, v2, v3, v4, v5)))
                        if limit is not None and len(out) >= limit:
                            return out
    return out


def sample_pentagons(g: Graph, x: int, pattern: Sequence[int | None], count: int,
                     rng: np.random.Generator, oracle: DistanceOracle | None = None,
                     max_tries: int | None = None) -> list[Pentagon]:
    """Random pentagons matching ``pattern`` built by a random walk s-t-u-z
    closed through a common neighbour w of z and s."""
    dx = _oracle(g, oracle).row(x)
    allowed = [np.ones(g.n, dtype=bool) if p is None else dx == p for p in pattern]
    starts = np.flatnonzero(allowed[2])
    out: list[Pentagon] = []
    tries = 0
    max_tries = max_tries or 50 * count
    while len(out) < count and tries < max_tries and starts.size:
        tries += 1
        u = int(rng.choice(starts))
        nu = g.adjacency(u)
        ts = nu[allowed[1][nu]]
        zs = nu[allowed[3][nu]]
        if not ts.size or not zs.size:
            continue
        t = int(rng.choice(ts))
        nt = g.adjacency(t)
        ss = nt[allowed[0][nt] & (nt != u)]
        if not ss.size:
            continue
        s = int(rng.choice(ss))
        z = int(rng.choice(zs))
        if z in (s, t):
            continue
        ws = np.intersect1d(g.adjacency(z), g.adjacency(s), assume_unique=True)
        ws = ws[allowed[4][ws] & (ws != u) & (ws != t)]
        if not ws.size:
            continue
        out.append(Pentagon((s, t, u, z, int(rng.choice(ws)))))
    return out


# ---------------------------------------------------------------------------
# hypotheses
# ---------------------------------------------------------------------------

def parallelogram_free_evidence(g: Graph, cert: DRGCertificate,
                                oracle: DistanceOracle | None = None) -> str:
    """Why the graph has no parallelograms of length >= 3.

    A classical-parameter fit of the certified array suffices (graphs with
    classical parameters, a_1 = 0 and a_2 != 0 are Q-polynomial and contain
    none).  Otherwise the graph itself is scanned when it is small enough.
    """
    gate = hypothesis_gate(cert)
    if not gate.admissible:
        raise HypothesisViolated("; ".join(gate.failures))
    fit = fit_classical_parameters(cert.array)
    if fit.matched:
        p = fit.candidates[0].params
        return f"classical-fit{tuple(p.to_json().values())}"
    oracle = _oracle(g, oracle)
    if oracle.dense:
        for length in range(3, cert.D + 1):
            if find_parallelograms(g, length, cert, first_only=True, oracle=oracle):
                raise HypothesisViolated(f"graph contains a parallelogram of length {length}")
        return "parallelogram-scan"
    raise HypothesisViolated("no classical fit and graph too large to scan for parallelograms")


# ---------------------------------------------------------------------------
# diameter-2 closed subgraphs
# ---------------------------------------------------------------------------

def omega_2(g: Graph, cert: DRGCertificate, z: int, s: int, oracle: DistanceOracle | None = None,
            evidence: str | None = None, cache: dict | None = None) -> ClosedSubgraphCertificate:
    """The regular closed diameter-2 subgraph through ``z`` and ``s``
    (the closure of ``{z, s}``), certified."""
    oracle = _oracle(g, oracle)
    if evidence is None:
        evidence = parallelogram_free_evidence(g, cert, oracle)
    if oracle.dist(z, s) != 2:
        raise ValueError(f"d({z}, {s}) = {oracle.dist(z, s)}, expected 2")
    arr = cert.array
    want = arr.cs[2] + arr.a[2]
    c = weak_geodetic_closure(g, [z, s], oracle, max_size=FULL_CHECK_LIMIT, cache=cache)
    if not (c.closed and c.diameter == 2 and c.valency == want):
        raise CertificationFailed(
            f"closure of ({z}, {s}) is not a regular closed diameter-2 subgraph of valency {want}",
            {"pair": [z, s], "size": c.size, "diameter": c.diameter, "valency": c.valency,
             "closed": c.closed})
    trace = dict(c.trace)
    trace.update({"pair": [int(z), int(s)], "evidence": evidence})
    return ClosedSubgraphCertificate(c.members, c.diameter, c.valency, c.closed, c.closed_wrt,
                                     "closure-fixed-point", c.closure_path, trace)


# ---------------------------------------------------------------------------
# the distance-3 construction
# ---------------------------------------------------------------------------

def interval_set(g: Graph, x: int, C, oracle: DistanceOracle | None = None,
                 method: str = "dag") -> VertexSubset:
    """[x, C] = {v : d(x,v) + d(v,z) = d(x,z) for some z in C}.

    ``method="dag"`` walks the BFS layering from ``x`` backwards from ``C`` and
    needs only one distance row; ``method="rows"`` evaluates the defining
    equation with a BFS row for every z in C.
    """
    C = _subset(C)
    oracle = _oracle(g, oracle)
    dx = oracle.row(x)
    if method == "dag":
        return VertexSubset.from_mask(kernels.interval_mark(g.indptr, g.indices, dx, C.mask(g.n)))
    if method == "rows":
        mask = np.zeros(g.n, dtype=bool)
        reach = dx != UNREACHABLE
        for z in C:
            dz = oracle.row(z)
            if dx[z] == UNREACHABLE:
                continue
            mask |= reach & (dz != UNREACHABLE) & (dx + dz == dx[z])
        return VertexSubset.from_mask(mask)
    raise ValueError(f"unknown method {method!r}")


def b_signatures(g: Graph, x: int, oracle: DistanceOracle | None = None) -> np.ndarray:
    """Row z is B(x, z) packed as a bitmask over the sorted neighbours of x."""
    oracle = _oracle(g, oracle)
    dx = oracle.row(x)
    nbrs = g.adjacency(x)
    far = oracle.rows(nbrs) == (dx + 1)[None, :]
    return np.ascontiguousarray(np.packbits(far, axis=0).T)


def build_C_set(g: Graph, cert: DRGCertificate | None, x: int, y: int,
                oracle: DistanceOracle | None = None, signatures: np.ndarray | None = None
                ) -> VertexSubset:
    """{z in Gamma_3(x) : B(x, z) = B(x, y)}."""
    oracle = _oracle(g, oracle)
    dx = oracle.row(x)
    if dx[y] != 3:
        raise ValueError(f"d({x}, {y}) = {dx[y]}, expected 3")
    sig = b_signatures(g, x, oracle) if signatures is None else signatures
    same = np.all(sig == sig[y], axis=1) & (dx == 3)
    return VertexSubset.from_mask(same)


def construct_delta(g: Graph, cert: DRGCertificate, x: int, y: int,
                    oracle: DistanceOracle | None = None, evidence: str | None = None,
                    full_limit: int = FULL_CHECK_LIMIT, cache: dict | None = None,
                    signatures: np.ndarray | None = None) -> ClosedSubgraphCertificate:
    """Build [x, C] for a pair at distance 3 and certify it as a regular
    weak-geodetically closed subgraph of diameter 3 with valency a_3 + c_3."""
    oracle = _oracle(g, oracle)
    if evidence is None:
        evidence = parallelogram_free_evidence(g, cert, oracle)
    C = build_C_set(g, cert, x, y, oracle, signatures)
    delta = interval_set(g, x, C, oracle)
    arr = cert.array
    want = arr.a[3] + arr.cs[3]
    dy = oracle.row(y)
    Bxy, Cxy, Axy = (
        set(g.adjacency(x)[dy[g.adjacency(x)] == 4].tolist()),
        set(g.adjacency(x)[dy[g.adjacency(x)] == 2].tolist()),
        set(g.adjacency(x)[dy[g.adjacency(x)] == 3].tolist()),
    )
    near = set(np.intersect1d(g.adjacency(x), delta.members).tolist())
    trace = {"pair": [int(x), int(y)], "C_size": len(C), "evidence": evidence,
             "gamma1_x_is_C_union_A": near == (Cxy | Axy),
             "B_disjoint": not (Bxy & near), "C": C}
    c = certify_subgraph(g, delta, "delta-construction", oracle, full_limit, cache, trace)
    checks = {
        "contains_pair": (x in delta) and (y in delta),
        "regular_valency": c.valency == want,
        "closed": c.closed,
        "diameter_3": c.diameter == 3,
    }
    if not all(checks.values()):
        raise CertificationFailed(
            f"[x, C] for ({x}, {y}) failed: {[k for k, v in checks.items() if not v]}",
            {"pair": [int(x), int(y)], "size": c.size, "valency": c.valency,
             "expected_valency": want, "diameter": c.diameter, "closed": c.closed, **checks})
    return c


# ---------------------------------------------------------------------------
# the closedness criterion for regular subgraphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegularClosureReport:
    gamma: int
    d: int
    closed_wrt: tuple[int, ...]
    closed: bool
    diameter: int | None
    valency_identity: bool | None

    @property
    def closed_wrt_some(self) -> bool:
        return bool(self.closed_wrt)

    @property
    def equivalence_holds(self) -> bool:
        return self.closed_wrt_some == (self.closed and self.diameter == self.d)

    def to_json(self) -> dict:
        return {"gamma": self.gamma, "d": self.d, "closed_wrt_some": self.closed_wrt_some,
                "closed": self.closed, "diameter": self.diameter,
                "valency_identity": self.valency_identity,
                "equivalence_holds": self.equivalence_holds}


def verify_regular_closure(g: Graph, omega, cert: DRGCertificate,
                     oracle: DistanceOracle | None = None) -> RegularClosureReport:
    """For a regular subgraph of valency gamma with d = min{i : gamma <= c_i + a_i}:
    closed w.r.t. some member <=> closed of diameter d; then gamma = c_d + a_d."""
    omega = _subset(omega)
    oracle = _oracle(g, oracle)
    diam, k = _shape(g, omega)
    if k is None:
        raise NotRegular("induced subgraph is not regular")
    arr = cert.array
    ca = [arr.cs[i] + arr.a[i] for i in range(arr.D + 1)]
    d = next(i for i in range(arr.D + 1) if k <= ca[i])
    wrt = tuple(closed_wrt_members(g, omega, oracle))
    closed = len(wrt) == len(omega)
    return RegularClosureReport(k, d, wrt, closed, diam, (k == ca[d]) if closed else None)


# ---------------------------------------------------------------------------
# i-boundedness
# ---------------------------------------------------------------------------

@dataclass
class BoundedReport:
    i: int
    sampling: str
    seed: int | None
    per_distance: dict = field(default_factory=dict)
    sampled_pairs: dict = field(default_factory=dict)
    subgraphs: list = field(default_factory=list)
    evidence: str | None = None

    @property
    def passed(self) -> bool:
        return all(v["passed"] == v["pairs"] for v in self.per_distance.values())

    def to_json(self) -> dict:
        return {"i": self.i, "sampling": self.sampling, "seed": self.seed,
                "passed": self.passed, "evidence": self.evidence,
                "per_distance": {str(k): v for k, v in sorted(self.per_distance.items())},
                "sampled_pairs": {str(k): v for k, v in sorted(self.sampled_pairs.items())},
                "subgraphs": self.subgraphs}


class _SubgraphIndex:
    """Certified subgraphs by diameter, searchable by member pair."""

    def __init__(self):
        self.by_vertex: dict[tuple[int, int], list[int]] = {}
        self.items: list[ClosedSubgraphCertificate] = []

    def add(self, c: ClosedSubgraphCertificate) -> int:
        idx = len(self.items)
        self.items.append(c)
        for v in c.members:
            self.by_vertex.setdefault((c.diameter, v), []).append(idx)
        return idx

    def find(self, diameter: int, x: int, y: int) -> ClosedSubgraphCertificate | None:
        a = self.by_vertex.get((diameter, x))
        b = self.by_vertex.get((diameter, y))
        if not a or not b:
            return None
        common = set(a).intersection(b)
        return self.items[min(common)] if common else None


def check_i_bounded(g: Graph, cert: DRGCertificate, i: int, sampling="exhaustive",
                    oracle: DistanceOracle | None = None, full_limit: int = FULL_CHECK_LIMIT,
                    reuse: bool = True) -> BoundedReport:
    """Certify a regular closed subgraph of diameter d(x, y) for pairs at
    distance <= i.

    ``sampling`` is ``"exhaustive"`` (all unordered pairs) or
    ``("random", count, seed)`` (``count`` pairs per distance 1..i drawn from a
    seeded generator).  Distance 1 uses the edge itself, distance 2 the closure
    of the pair, distance 3 the [x, C] construction.  With ``reuse`` a pair
    already covered by a certified subgraph of the right diameter is credited
    to it, and [x, C] is built once per class of y with equal B(x, y).
    Failures raise :class:`CertificationFailed`.
    """
    oracle = _oracle(g, oracle)
    D = cert.D
    if not 0 <= i <= D:
        raise ValueError(f"i must lie in 0..{D}")
    if i > 3:
        raise ValueError("constructions exist only up to distance 3")
    arr = cert.array
    evidence = None
    if i >= 1 and arr.a[1] != 0:
        raise HypothesisViolated(f"a1 = {arr.a[1]} != 0: edges are not closed")
    if i >= 2:
        evidence = parallelogram_free_evidence(g, cert, oracle)

    if sampling == "exhaustive":
        mode, seed, count = "exhaustive", None, None
    else:
        mode, count, seed = sampling
        if mode != "random":
            raise ValueError(f"unknown sampling {sampling!r}")
    report = BoundedReport(i, mode, seed, evidence=evidence)
    for d in range(i + 1):
        report.per_distance[d] = {"pairs": 0, "passed": 0, "constructed": 0, "reused": 0,
                                  "sizes": [], "valencies": []}

    index = _SubgraphIndex()
    vcache: dict = {}
    delta_by_class: dict = {}
    sig_cache: dict = {}

    def certify_pair(x: int, y: int, d: int):
        stats = report.per_distance[d]
        stats["pairs"] += 1
        if d == 0:
            stats["passed"] += 1
            stats["sizes"], stats["valencies"] = [1], [0]
            return
        if d == 1:
            ok = is_closed_wrt(g, [x, y], x, oracle)[0] and is_closed_wrt(g, [x, y], y, oracle)[0]
            if not ok:
                raise CertificationFailed(f"edge ({x}, {y}) is not closed", {"pair": [x, y]})
            stats["passed"] += 1
            stats["sizes"], stats["valencies"] = [2], [1]
            return
        if reuse:
            hit = index.find(d, x, y)
            if hit is not None:
                stats["passed"] += 1
                stats["reused"] += 1
                return
        if d == 2:
            c = omega_2(g, cert, x, y, oracle, evidence, vcache)
        else:
            if reuse:
                sig = sig_cache.get(x)
                if sig is None:
                    sig_cache.clear()
                    sig = sig_cache[x] = b_signatures(g, x, oracle)
                key = (x, sig[y].tobytes())
                c = delta_by_class.get(key)
                if c is None:
                    c = construct_delta(g, cert, x, y, oracle, evidence, full_limit, vcache, sig)
                    delta_by_class[key] = c
                else:
                    stats["passed"] += 1
                    stats["reused"] += 1
                    return
            else:
                c = construct_delta(g, cert, x, y, oracle, evidence, full_limit, vcache)
        stats["passed"] += 1
        stats["constructed"] += 1
        for key, val in (("sizes", c.size), ("valencies", c.valency)):
            if val not in stats[key]:
                stats[key] = sorted(stats[key] + [val])
        if reuse and d == 2:
            index.add(c)
        if len(report.subgraphs) < 200:
            rec = c.to_json()
            rec["distance"] = d
            report.subgraphs.append(rec)

    if mode == "exhaustive":
        for x in range(g.n):
            dx = oracle.row(x)
            for d in range(i + 1):
                ys = np.flatnonzero(dx == d)
                for y in ys[ys >= x].tolist():
                    certify_pair(x, y, d)
    else:
        rng = np.random.default_rng(seed)
        for d in range(1, i + 1):
            pairs = []
            for _ in range(count):
                x = int(rng.integers(g.n))
                ys = np.flatnonzero(oracle.row(x) == d)
                if not ys.size:
                    continue
                y = int(rng.choice(ys))
                pairs.append([x, y])
                certify_pair(x, y, d)
            report.sampled_pairs[d] = pairs
    return report


# ---------------------------------------------------------------------------
# lemma-level property checks
# ---------------------------------------------------------------------------

@dataclass
class LemmaReport:
    x: int
    seed: int
    checks: dict = field(default_factory=dict)

    @property
    def violations(self) -> int:
        return sum(v["violations"] for v in self.checks.values())

    @property
    def configurations(self) -> int:
        return sum(v["configurations"] for v in self.checks.values())

    def to_json(self) -> dict:
        return {"x": self.x, "seed": self.seed, "configurations": self.configurations,
                "violations": self.violations, "checks": self.checks}


def _entry():
    return {"configurations": 0, "violations": 0, "examples": []}


def lemma_property_suite(g: Graph, cert: DRGCertificate, x: int, samples: int = 500,
                         seed: int = 0, omega_samples: int = 50,
                         oracle: DistanceOracle | None = None) -> LemmaReport:
    """Empirical checks of the structural facts behind the distance-3 construction.

    * ``b_set_edge_invariance``: adjacent z, z' in the same Gamma_i(x) have
      B(x, z) = B(x, z') (every such edge is checked).
    * ``pentagon_distance_exclusion``: for pentagons s t u z w with s, u in
      Gamma_3(x), z in Gamma_2(x) and v in B(x, u), d(v, s) != 2.
    * ``pentagon_b_set_equality``: for the same pentagons, B(x, s) = B(x, u).
    * ``omega2_distance_shift``: for a closed diameter-2 subgraph Omega meeting
      Gamma_{i-1}(x) in u and Gamma_{i+1}(x), d(x, t) = i - 1 + d(u, t) on Omega.
    """
    oracle = _oracle(g, oracle)
    evidence = parallelogram_free_evidence(g, cert, oracle)
    rng = np.random.default_rng(seed)
    rep = LemmaReport(x, seed)
    dx = oracle.row(x)
    nbrs = g.adjacency(x)
    nrows = oracle.rows(nbrs)
    sig = b_signatures(g, x, oracle)

    e = rep.checks["b_set_edge_invariance"] = _entry()
    edges = g.edges()
    same = dx[edges[:, 0]] == dx[edges[:, 1]]
    u, v = edges[same, 0], edges[same, 1]
    diff = np.any(sig[u] != sig[v], axis=1)
    e["configurations"] = int(same.sum())
    e["violations"] = int(diff.sum())
    e["examples"] = [[int(a), int(b)] for a, b in zip(u[diff][:5], v[diff][:5])]

    e3 = rep.checks["pentagon_distance_exclusion"] = _entry()
    e5 = rep.checks["pentagon_b_set_equality"] = _entry()
    if cert.D >= 3:
        for p in sample_pentagons(g, x, (3, None, 3, 2, None), samples, rng, oracle):
            s, t, uu, z, w = p.vertices
            far = dx + 1
            bxu = np.flatnonzero(nrows[:, uu] == far[uu])
            e3["configurations"] += 1
            if np.any(nrows[bxu, s] == 2):
                e3["violations"] += 1
                e3["examples"].append(list(p.vertices))
            e5["configurations"] += 1
            if not np.array_equal(sig[s], sig[uu]):
                e5["violations"] += 1
                e5["examples"].append(list(p.vertices))

    e25 = rep.checks["omega2_distance_shift"] = _entry()
    cache: dict = {}
    levels = [lv for lv in range(0, cert.D - 1)]
    for _ in range(omega_samples):
        lv = int(rng.choice(levels))
        zs = np.flatnonzero(dx == lv)
        z = int(rng.choice(zs))
        dz = oracle.row(z)
        ss = np.flatnonzero((dz == 2) & (dx == lv + 2))
        if not ss.size:
            continue
        s = int(rng.choice(ss))
        om = omega_2(g, cert, z, s, oracle, evidence, cache)
        mem = om.members.members
        dm = dx[mem]
        for i in range(1, cert.D):
            if not (np.any(dm == i - 1) and np.any(dm == i + 1)):
                continue
            for uu in mem[dm == i - 1].tolist():
                du = oracle.row(uu)
                e25["configurations"] += 1
                if not np.array_equal(dm, i - 1 + du[mem]):
                    e25["violations"] += 1
                    e25["examples"].append({"omega_pair": [z, s], "u": uu, "i": i})
    for entry in rep.checks.values():
        entry["examples"] = entry["examples"][:5]
    return rep
