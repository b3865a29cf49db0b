"""Distance-regularity certification and the intersection numbers p^h_ij."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .errors import Disconnected, OracleMismatch
from .graph import DistanceRow, Graph, UNREACHABLE, VertexSubset, all_distances

COUNT_LIMIT = 2000


@dataclass(frozen=True)
class IntersectionArray:
    """``{b_0, ..., b_{D-1}; c_1, ..., c_D}`` with the derived a_i and k_i."""

    b: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        b = tuple(int(x) for x in self.b)
        c = tuple(int(x) for x in self.c)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        if len(b) != len(c) or not b:
            raise ValueError("b and c must have the same positive length")
        if min(b) < 1 or min(c) < 1:
            raise ValueError(f"intersection numbers must be positive: {self}")
        if c[0] != 1:
            raise ValueError("c_1 must equal 1")
        if any(x < 0 for x in self.a):
            raise ValueError(f"negative a_i in {self}")
        k = [1]
        for i in range(self.D):
            num = k[i] * b[i]
            if num % c[i]:
                raise ValueError(f"k_{i + 1} = {Fraction(num, c[i])} is not an integer")
            k.append(num // c[i])
        object.__setattr__(self, "_ks", tuple(k))

    @property
    def D(self) -> int:
        return len(self.b)

    @property
    def k(self) -> int:
        return self.b[0]

    @property
    def bs(self) -> tuple[int, ...]:
        """b_0..b_D with b_D = 0."""
        return self.b + (0,)

    @property
    def cs(self) -> tuple[int, ...]:
        """c_0..c_D with c_0 = 0."""
        return (0,) + self.c

    @property
    def a(self) -> tuple[int, ...]:
        return tuple(self.k - bi - ci for bi, ci in zip(self.bs, self.cs))

    @property
    def ks(self) -> tuple[int, ...]:
        return self._ks

    @property
    def n(self) -> int:
        return sum(self._ks)

    def tridiagonal(self) -> np.ndarray:
        """L with L[h, j] = p^h_{1j}."""
        D = self.D
        L = np.zeros((D + 1, D + 1), dtype=np.int64)
        for h in range(D + 1):
            if h > 0:
                L[h, h - 1] = self.cs[h]
            L[h, h] = self.a[h]
            if h < D:
                L[h, h + 1] = self.bs[h]
        return L

    def to_json(self) -> dict:
        return {"b": list(self.b), "c": list(self.c), "a": list(self.a), "k": list(self.ks)}

    def __str__(self):
        return "{" + ",".join(map(str, self.b)) + ";" + ",".join(map(str, self.c)) + "}"


@dataclass(frozen=True, eq=False)
class DRGCertificate:
    """Certified intersection numbers.

    ``mode`` records how much was checked: ``"counted"`` (every p^h_ij over all
    ordered pairs), ``"array-verified"`` (b, a, c over all pairs, tensor from
    the recurrence) or ``"spot-verified"`` (b, a, c over the pairs through a
    sample of base vertices).
    """

    array: IntersectionArray
    tensor: np.ndarray
    verified: bool = True
    mode: str = "counted"
    sources_checked: int = 0

    @property
    def D(self) -> int:
        return self.array.D

    def to_json(self) -> dict:
        return {
            "distance_regular": True,
            "array": self.array.to_json(),
            "array_text": str(self.array),
            "mode": self.mode,
            "sources_checked": self.sources_checked,
            "tensor_flag": "counted" if self.mode == "counted" else "recurrence",
            "tensor": self.tensor.tolist(),
        }


@dataclass(frozen=True)
class NonDRGWitness:
    """Two vertex pairs, both at distance ``h``, whose counts
    ``|{z : d(x, z) = i, d(y, z) = j}|`` differ."""

    reason: str
    h: int
    i: int
    j: int
    pairs: tuple[tuple[int, int], tuple[int, int]]
    counts: tuple[int, int]

    def to_json(self) -> dict:
        return {"distance_regular": False, "reason": self.reason, "h": self.h, "i": self.i,
                "j": self.j, "pairs": [list(p) for p in self.pairs],
                "counts": list(self.counts)}


def tensor_from_array(arr: IntersectionArray) -> np.ndarray:
    """p^h_ij from the array via A_1 A_i = b_{i-1} A_{i-1} + a_i A_i + c_{i+1} A_{i+1}.

    Exact rational arithmetic; raises ``ValueError`` if an entry comes out
    negative or fractional (the array is then not realisable).
    """
    D = arr.D
    L = [[Fraction(int(x)) for x in row] for row in arr.tridiagonal()]
    ident = [[Fraction(int(h == j)) for j in range(D + 1)] for h in range(D + 1)]
    mats = [ident, L]
    a, bs, cs = arr.a, arr.bs, arr.cs
    for i in range(1, D):
        prod = [[sum(L[h][m] * mats[i][m][j] for m in range(D + 1)) for j in range(D + 1)]
                for h in range(D + 1)]
        nxt = [[(prod[h][j] - bs[i - 1] * mats[i - 1][h][j] - a[i] * mats[i][h][j]) / cs[i + 1]
                for j in range(D + 1)] for h in range(D + 1)]
        mats.append(nxt)
    out = np.zeros((D + 1, D + 1, D + 1), dtype=np.int64)
    for i in range(D + 1):
        for h in range(D + 1):
            for j in range(D + 1):
                v = mats[i][h][j]
                if v.denominator != 1 or v < 0:
                    raise ValueError(f"p^{h}_{i}{j} = {v} is not a nonnegative integer")
                out[h, i, j] = int(v)
    return out


def _not_regular_witness(g: Graph) -> NonDRGWitness | None:
    deg = g.degrees()
    other = np.flatnonzero(deg != deg[0])
    if not other.size:
        return None
    v = int(other[0])
    return NonDRGWitness("not-regular", 0, 1, 1, ((0, 0), (v, v)), (int(deg[0]), int(deg[v])))


def _require_connected(g: Graph) -> None:
    d = kernels.bfs(g.indptr, g.indices, 0)
    miss = np.flatnonzero(d == UNREACHABLE)
    if miss.size:
        raise Disconnected(0, int(miss[0]))


def _certify_by_counting(g: Graph) -> DRGCertificate | NonDRGWitness:
    dm = all_distances(g)
    D = int(dm.max())
    ind = [(dm == i).astype(np.float64) for i in range(D + 1)]
    at = [dm == h for h in range(D + 1)]
    first = [tuple(int(t) for t in np.argwhere(at[h])[0]) for h in range(D + 1)]
    tensor = np.zeros((D + 1, D + 1, D + 1), dtype=np.int64)
    for i in range(D + 1):
        for j in range(i, D + 1):
            prod = ind[i] @ ind[j]
            for h in range(D + 1):
                x0, y0 = first[h]
                ref = prod[x0, y0]
                bad = at[h] & (prod != ref)
                if bad.any():
                    x1, y1 = (int(t) for t in np.argwhere(bad)[0])
                    return NonDRGWitness("intersection-number", h, i, j,
                                         ((x0, y0), (x1, y1)),
                                         (int(round(ref)), int(round(prod[x1, y1]))))
                tensor[h, i, j] = tensor[h, j, i] = int(round(ref))
    arr = IntersectionArray(
        b=[tensor[i, 1, i + 1] for i in range(D)],
        c=[tensor[i, 1, i - 1] for i in range(1, D + 1)],
    )
    return DRGCertificate(arr, tensor, True, "counted", g.n)


def _certify_by_array(g: Graph, sources: Sequence[int], spot: bool) -> DRGCertificate | NonDRGWitness:
    expected: dict[int, tuple[int, int, int]] = {}
    first_pair: dict[int, tuple[int, int]] = {}
    D = 0
    for x in sources:
        d = kernels.bfs(g.indptr, g.indices, int(x))
        counts = kernels.layer_counts(g.indptr, g.indices, d)
        D = max(D, int(d.max()))
        for h in range(int(d.max()) + 1):
            ys = np.flatnonzero(d == h)
            blk = counts[ys]
            if h not in expected:
                expected[h] = tuple(int(t) for t in blk[0])
                first_pair[h] = (int(ys[0]), int(x))
            bad = np.flatnonzero(np.any(blk != np.array(expected[h]), axis=1))
            if bad.size:
                y = int(ys[bad[0]])
                col = int(np.flatnonzero(blk[bad[0]] != np.array(expected[h]))[0])
                return NonDRGWitness("intersection-number", h, 1, h - 1 + col,
                                     (first_pair[h], (y, int(x))),
                                     (expected[h][col], int(blk[bad[0], col])))
    if any(h not in expected for h in range(D + 1)):
        raise AssertionError("distance layers missing")
    arr = IntersectionArray(b=[expected[i][2] for i in range(D)],
                            c=[expected[i][0] for i in range(1, D + 1)])
    return DRGCertificate(arr, tensor_from_array(arr), True,
                          "spot-verified" if spot else "array-verified", len(sources))


def certify_distance_regular(g: Graph, sources: Sequence[int] | None = None,
                             count_limit: int = COUNT_LIMIT) -> DRGCertificate | NonDRGWitness:
    """Decide distance-regularity.

    With ``sources=None`` and ``n <= count_limit`` every p^h_ij is counted over
    all ordered pairs (through products of distance-indicator matrices).
    Otherwise b_i, a_i, c_i are checked for every pair ``(y, x)`` with ``x`` in
    ``sources`` (all vertices if ``None``) and the tensor is derived from the
    array.  Raises :class:`Disconnected`; irregular graphs give a witness.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    _require_connected(g)
    w = _not_regular_witness(g)
    if w is not None:
        return w
    if sources is None and g.n <= count_limit:
        return _certify_by_counting(g)
    if sources is None:
        return _certify_by_array(g, range(g.n), spot=False)
    src = sorted({int(s) for s in sources})
    return _certify_by_array(g, src, spot=len(src) < g.n)


def intersection_tensor(cert: DRGCertificate) -> np.ndarray:
    """The (D+1)^3 tensor, cross-checked against the recurrence from the array."""
    rec = tensor_from_array(cert.array)
    if not np.array_equal(rec, cert.tensor):
        raise OracleMismatch("counted tensor disagrees with the three-term recurrence")
    return cert.tensor


def local_sets(g: Graph, drow_y: DistanceRow, x: int) -> tuple[VertexSubset, VertexSubset, VertexSubset]:
    """``(B(x,y), C(x,y), A(x,y))`` where ``y`` is the source of ``drow_y``."""
    i = int(drow_y.dist[x])
    if i == UNREACHABLE:
        raise Disconnected(drow_y.source, x)
    nb = g.adjacency(x)
    dn = drow_y.dist[nb]
    return (VertexSubset(nb[dn == i + 1]), VertexSubset(nb[dn == i - 1]),
            VertexSubset(nb[dn == i]))


@dataclass(frozen=True)
class GateReport:
    D: int
    a1: int
    a2: int | None
    diameter_ok: bool
    a1_zero: bool
    a2_nonzero: bool
    failures: list = field(default_factory=list)

    @property
    def admissible(self) -> bool:
        return self.diameter_ok and self.a1_zero and self.a2_nonzero

    def to_json(self) -> dict:
        return {"D": self.D, "a1": self.a1, "a2": self.a2, "D_ge_3": self.diameter_ok,
                "a1_zero": self.a1_zero, "a2_nonzero": self.a2_nonzero,
                "admissible": self.admissible, "failures": list(self.failures)}


def hypothesis_gate(cert: DRGCertificate) -> GateReport:
    """The standing hypotheses D >= 3, a_1 = 0, a_2 != 0."""
    a = cert.array.a
    D = cert.D
    a2 = a[2] if D >= 2 else None
    fails = []
    if D < 3:
        fails.append(f"D = {D} < 3")
    if a[1] != 0:
        fails.append(f"a1 = {a[1]} != 0")
    if not a2:
        fails.append(f"a2 = {a2} is zero" if a2 is not None else "a2 undefined (D < 2)")
    return GateReport(D, a[1], a2, D >= 3, a[1] == 0, bool(a2), fails)
