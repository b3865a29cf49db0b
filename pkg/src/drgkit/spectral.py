"""Bose-Mesner spectral data.

Two routes are kept side by side.  The fast route works from the intersection
array alone: eigenvalues of the tridiagonal intersection matrix, the standard
sequences u_i(theta), multiplicities, eigenmatrices and Krein parameters.  The
dense route builds the primitive idempotents of an actual graph and evaluates
the definitions entrywise; it is limited to ``dense_limit`` vertices and is
used as the oracle for the fast route.

Index conventions: ``P[l, i]`` is the eigenvalue of A_i on eigenspace l,
``Q[i, l]`` is the coefficient of A_i in ``n * E_l`` (the dual eigenvalue
theta*_i of E_l), and ``q[h, i, j]`` is the Krein parameter q^h_ij.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .drg import IntersectionArray
from .errors import (
    DegenerateDenominator,
    DenseLimitExceeded,
    EigenFailure,
    NonIntegerMultiplicity,
    OracleMismatch,
)
from .graph import Graph, all_distances

DENSE_LIMIT = 2048


@dataclass(frozen=True)
class Tolerances:
    """``abs_tol`` for matrix residuals, ``rel_zero`` for "is this Krein parameter zero"."""

    abs_tol: float = 1e-9
    rel_zero: float = 1e-6
    mult_tol: float = 1e-6

    def to_json(self) -> dict:
        return {"regime": "float64", "abs_tol": self.abs_tol, "rel_zero": self.rel_zero,
                "mult_tol": self.mult_tol}


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True, eq=False)
class SpectralData:
    array: IntersectionArray
    n: int
    theta: np.ndarray
    mult: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    u: np.ndarray  # u[l, i] = u_i(theta_l)

    @property
    def D(self) -> int:
        return self.array.D

    def to_json(self) -> dict:
        return {"theta": self.theta.tolist(), "mult": self.mult.tolist(),
                "P": self.P.tolist(), "Q": self.Q.tolist()}


@dataclass(frozen=True, eq=False)
class DualEigenvalues:
    e_index: int
    theta_star: np.ndarray
    ordering: tuple[int, ...] | None = None


@dataclass(frozen=True, eq=False)
class KreinTensor:
    q: np.ndarray
    ordering: tuple[int, ...]

    def zero_pattern(self, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
        return np.abs(self.q) <= tol.rel_zero * np.abs(self.q).max()

    def reorder(self, ordering) -> "KreinTensor":
        o = np.asarray(ordering)
        return KreinTensor(self.q[np.ix_(o, o, o)], tuple(int(t) for t in o))


@dataclass(frozen=True, eq=False)
class QPolyOrdering:
    order: tuple[int, ...]
    dual: DualEigenvalues

    def to_json(self) -> dict:
        return {"order": list(self.order), "E1": self.order[1],
                "theta_star": self.dual.theta_star.tolist()}


def standard_sequence(arr: IntersectionArray, theta: float) -> np.ndarray:
    """u_0..u_D with u_0 = 1, u_1 = theta/k and
    c_i u_{i-1} + a_i u_i + b_i u_{i+1} = theta u_i."""
    D = arr.D
    a, bs, cs = arr.a, arr.bs, arr.cs
    u = np.zeros(D + 1)
    u[0] = 1.0
    if D >= 1:
        u[1] = theta / arr.k
    for i in range(1, D):
        u[i + 1] = ((theta - a[i]) * u[i] - cs[i] * u[i - 1]) / bs[i]
    return u


def eigen_from_array(arr: IntersectionArray, n: int | None = None,
                     tol: Tolerances = DEFAULT_TOL) -> SpectralData:
    if n is None:
        n = arr.n
    if n != arr.n:
        raise ValueError(f"n = {n} but the array has {arr.n} vertices")
    D = arr.D
    a, bs, cs = arr.a, arr.bs, arr.cs
    sym = np.diag(np.array(a, dtype=float))
    off = np.sqrt(np.array([bs[i] * cs[i + 1] for i in range(D)], dtype=float))
    sym += np.diag(off, 1) + np.diag(off, -1)
    theta = np.sort(np.linalg.eigvalsh(sym))[::-1]
    theta[0] = arr.k if abs(theta[0] - arr.k) < 1e-8 * arr.k else theta[0]
    gaps = -np.diff(theta)
    if gaps.size and gaps.min() < tol.abs_tol * max(1.0, arr.k):
        raise EigenFailure(f"repeated eigenvalue (gap {gaps.min():.3g})")
    if abs(theta[0] - arr.k) > 1e-8 * arr.k:
        raise EigenFailure("largest eigenvalue differs from the valency")
    ks = np.array(arr.ks, dtype=float)
    u = np.array([standard_sequence(arr, t) for t in theta])
    raw = n / (u ** 2 @ ks)
    mult = np.rint(raw)
    if np.any(np.abs(raw - mult) > tol.mult_tol * np.maximum(1.0, raw)) or np.any(mult < 1):
        raise NonIntegerMultiplicity(f"multiplicities {raw.tolist()}")
    mult = mult.astype(np.int64)
    P = u * ks[None, :]
    Q = (u * mult[:, None]).T
    if np.abs(P @ Q - n * np.eye(D + 1)).max() > 1e-8 * n:
        raise EigenFailure("P Q != n I")
    return SpectralData(arr, n, theta, mult, P, Q, u)


def adjacency_dense(g: Graph) -> np.ndarray:
    A = np.zeros((g.n, g.n))
    e = g.edges()
    A[e[:, 0], e[:, 1]] = 1.0
    A[e[:, 1], e[:, 0]] = 1.0
    return A


def primitive_idempotents_dense(g: Graph, spec: SpectralData,
                                dense_limit: int = DENSE_LIMIT) -> list[np.ndarray]:
    """E_0..E_D (in the order of ``spec.theta``) by spectral projection of A."""
    if g.n > dense_limit:
        raise DenseLimitExceeded(f"n = {g.n} > dense limit {dense_limit}")
    vals, vecs = np.linalg.eigh(adjacency_dense(g))
    out = []
    for t, m in zip(spec.theta, spec.mult):
        sel = np.abs(vals - t) < 1e-6 * max(1.0, abs(t))
        if sel.sum() != m:
            raise EigenFailure(f"eigenvalue {t:.6g}: dense multiplicity {sel.sum()} != {m}")
        V = vecs[:, sel]
        out.append(V @ V.T)
    return out


def dual_eigenvalues(spec: SpectralData, e_index: int) -> DualEigenvalues:
    """theta*_0..theta*_D of E_{e_index}: E = n^-1 sum_i theta*_i A_i."""
    if not 0 <= e_index <= spec.D:
        raise IndexError(e_index)
    return DualEigenvalues(e_index, spec.Q[:, e_index].copy())


def dual_eigenvalues_dense(E: np.ndarray, dmat: np.ndarray) -> np.ndarray:
    """Read theta*_i off a dense idempotent: n * E[x, y] for any pair at distance i."""
    n = E.shape[0]
    D = int(dmat.max())
    out = np.zeros(D + 1)
    for i in range(D + 1):
        x, y = np.argwhere(dmat == i)[0]
        out[i] = n * E[x, y]
    return out


def krein_fast(spec: SpectralData) -> np.ndarray:
    """q^h_ij = (m_i m_j / n) sum_l k_l u_l(theta_i) u_l(theta_j) u_l(theta_h)."""
    ks = np.array(spec.array.ks, dtype=float)
    u = spec.u
    m = spec.mult.astype(float)
    core = np.einsum("l,il,jl,hl->hij", ks, u, u, u)
    return core * (m[None, :, None] * m[None, None, :]) / spec.n


def krein_dense(E: list[np.ndarray], mult) -> np.ndarray:
    """q^h_ij = n * <E_i o E_j, E_h> / m_h, straight from the idempotents."""
    n = E[0].shape[0]
    d1 = len(E)
    q = np.zeros((d1, d1, d1))
    for i in range(d1):
        for j in range(i, d1):
            had = E[i] * E[j]
            for h in range(d1):
                q[h, i, j] = q[h, j, i] = n * np.sum(had * E[h]) / mult[h]
    return q


def krein_parameters(spec: SpectralData, ordering=None, dense: list[np.ndarray] | None = None,
                     agree_tol: float = 1e-7) -> KreinTensor:
    """Krein tensor on the fast path; with ``dense`` idempotents it is also
    recomputed entrywise and any disagreement raises :class:`OracleMismatch`."""
    q = krein_fast(spec)
    if dense is not None:
        qd = krein_dense(dense, spec.mult)
        err = np.abs(q - qd).max()
        if err > agree_tol:
            raise OracleMismatch(f"Krein fast path vs dense oracle differ by {err:.3g}")
    kt = KreinTensor(q, tuple(range(spec.D + 1)))
    return kt if ordering is None else kt.reorder(ordering)


def qpoly_pattern_ok(q: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Vanishing/nonvanishing pattern of a Krein tensor already in the
    candidate order."""
    d1 = q.shape[0]
    zero = np.abs(q) <= tol.rel_zero * np.abs(q).max()
    for h, i, j in itertools.product(range(d1), repeat=3):
        top = max(h, i, j)
        rest = h + i + j - top
        if top > rest and not zero[h, i, j]:
            return False
        if top == rest and zero[h, i, j]:
            return False
    return True


def find_qpoly_orderings(spec: SpectralData, krein: KreinTensor | None = None,
                         tol: Tolerances = DEFAULT_TOL) -> list[QPolyOrdering]:
    """Every Q-polynomial ordering E_0, E_1, ..., E_D.

    Each eigenspace is tried as E_1; the chain is grown along the support of
    q^l_{1, current}, branching whenever more than one unused index is
    admissible, and every complete chain is re-verified on all triples.
    """
    q = (krein or krein_parameters(spec)).q
    D = spec.D
    zero = np.abs(q) <= tol.rel_zero * np.abs(q).max()
    found: list[tuple[int, ...]] = []

    def grow(order: list[int]):
        if len(order) == D + 1:
            o = np.array(order)
            if qpoly_pattern_ok(q[np.ix_(o, o, o)], tol):
                found.append(tuple(order))
            return
        e1, cur = order[1], order[-1]
        for nxt in range(1, D + 1):
            if nxt not in order and not zero[nxt, e1, cur]:
                grow(order + [nxt])

    for e1 in range(1, D + 1):
        grow([0, e1])
    return [QPolyOrdering(o, DualEigenvalues(o[1], spec.Q[:, o[1]].copy(), o)) for o in found]


def qpoly_orderings_exhaustive(spec: SpectralData, krein: KreinTensor | None = None,
                               tol: Tolerances = DEFAULT_TOL) -> list[tuple[int, ...]]:
    """Brute force over all (D)! orderings; the test oracle for the search above."""
    q = (krein or krein_parameters(spec)).q
    out = []
    for perm in itertools.permutations(range(1, spec.D + 1)):
        o = np.array((0,) + perm)
        if qpoly_pattern_ok(q[np.ix_(o, o, o)], tol):
            out.append(tuple(int(t) for t in o))
    return out


def verify_representation_identity(g: Graph, E: np.ndarray, theta_star, h: int, i: int, j: int,
                                   x: int, y: int, dmat: np.ndarray | None = None,
                                   tol: Tolerances = DEFAULT_TOL) -> float:
    """Max-norm residual of

        sum_{d(x,z)=i, d(y,z)=j} E z^ - sum_{d(x,z)=j, d(y,z)=i} E z^
            = p^h_ij (theta*_i - theta*_j) / (theta*_0 - theta*_h) (E x^ - E y^)

    for a pair ``x, y`` at distance ``h``.
    """
    if g.n > E.shape[0]:
        raise DenseLimitExceeded("idempotent does not match the graph")
    rows = dmat[[x, y]] if dmat is not None else all_distances(g, [x, y])
    dx, dy = rows[0], rows[1]
    if dx[y] != h or h < 1:
        raise ValueError(f"d(x, y) = {dx[y]}, expected h = {h} >= 1")
    ts = np.asarray(theta_star, dtype=float)
    denom = ts[0] - ts[h]
    if abs(denom) <= tol.abs_tol * max(1.0, abs(ts[0])):
        raise DegenerateDenominator(f"theta*_0 = theta*_{h}")
    s_ij = (dx == i) & (dy == j)
    s_ji = (dx == j) & (dy == i)
    lhs = E[:, s_ij].sum(axis=1) - E[:, s_ji].sum(axis=1)
    p = int(s_ij.sum())
    rhs = p * (ts[i] - ts[j]) / denom * (E[:, x] - E[:, y])
    return float(np.abs(lhs - rhs).max())


def idempotent_identities(E: list[np.ndarray], theta=None, A: np.ndarray | None = None) -> dict:
    """Max-norm residuals of the defining identities of the idempotent basis.

    Keys: ``E0_is_J_over_n``, ``idempotent`` (E_i^2 = E_i), ``orthogonal``
    (E_i E_j = 0 for i != j), ``resolution`` (sum E_i = I), ``symmetric``;
    with ``A`` and ``theta`` also ``eigen`` (A E_i = theta_i E_i).
    """
    n = E[0].shape[0]
    res = {
        "E0_is_J_over_n": float(np.abs(E[0] - 1.0 / n).max()),
        "idempotent": max(float(np.abs(Ei @ Ei - Ei).max()) for Ei in E),
        "orthogonal": max((float(np.abs(E[i] @ E[j]).max())
                           for i in range(len(E)) for j in range(i + 1, len(E))), default=0.0),
        "resolution": float(np.abs(sum(E) - np.eye(n)).max()),
        "symmetric": max(float(np.abs(Ei - Ei.T).max()) for Ei in E),
    }
    if A is not None and theta is not None:
        res["eigen"] = max(float(np.abs(A @ Ei - t * Ei).max()) for Ei, t in zip(E, theta))
    return res


def gram_residual(E: np.ndarray, theta_star, dmat: np.ndarray) -> float:
    """max |<E x, E y> - theta*_{d(x,y)} / n| over all pairs."""
    n = E.shape[0]
    ts = np.asarray(theta_star, dtype=float)
    return float(np.abs(E.T @ E - ts[dmat] / n).max())


def sample_representation_residuals(g: Graph, E: np.ndarray, theta_star, count: int,
                                    rng: np.random.Generator, dmat: np.ndarray,
                                    tol: Tolerances = DEFAULT_TOL) -> dict:
    """Evaluate :func:`verify_representation_identity` on ``count`` random
    ``(h, i, j, x, y)`` with ``d(x, y) = h >= 1``."""
    D = int(dmat.max())
    worst, tuples = 0.0, []
    for _ in range(count):
        h = int(rng.integers(1, D + 1))
        x = int(rng.integers(g.n))
        ys = np.flatnonzero(dmat[x] == h)
        y = int(rng.choice(ys))
        i, j = (int(t) for t in rng.integers(0, D + 1, size=2))
        r = verify_representation_identity(g, E, theta_star, h, i, j, x, y, dmat, tol)
        worst = max(worst, r)
        tuples.append((h, i, j, x, y))
    return {"samples": count, "max_residual": worst, "tuples": tuples}
