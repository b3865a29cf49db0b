"""Deliberately naive reference implementations used as test oracles."""

import itertools

import numpy as np

from drgkit.graph import Graph, all_distances


def brute_tensor(g: Graph):
    """p[h][i][j] by a triple loop over (x, y, z), or None if some count
    depends on the pair."""
    d = all_distances(g)
    D = int(d.max())
    seen = {}
    for x in range(g.n):
        for y in range(g.n):
            h = d[x, y]
            counts = np.zeros((D + 1, D + 1), dtype=int)
            for z in range(g.n):
                counts[d[x, z], d[y, z]] += 1
            if h in seen and not np.array_equal(seen[h], counts):
                return None
            seen[h] = counts
    return np.array([seen[h] for h in range(D + 1)])


def naive_closure(d: np.ndarray, seed) -> set:
    """Iterate the weak-geodetic rule over all member pairs until stable."""
    members = set(int(v) for v in seed)
    while True:
        M = np.array(sorted(members))
        grow = np.zeros(d.shape[0], dtype=bool)
        for x in M:
            grow |= np.any(d[x][None, :] + d[M] <= d[x, M][:, None] + 1, axis=0)
        new = set(np.flatnonzero(grow).tolist())
        if new <= members:
            return members
        members |= new


def naive_is_closed(d: np.ndarray, omega) -> bool:
    return naive_closure(d, omega) == set(int(v) for v in omega)


def naive_parallelograms(g: Graph, d: np.ndarray, length: int) -> set:
    arcs = [(u, v) for u in range(g.n) for v in g.adjacency(u).tolist()]
    out = set()
    for (x, y), (z, w) in itertools.product(arcs, repeat=2):
        if (d[x, z] == length and d[x, w] == length - 1 and d[y, w] == length - 1
                and d[y, z] == length - 1):
            out.add((x, y, z, w))
    return out


def naive_pentagons(g: Graph, d: np.ndarray, x: int, pattern) -> set:
    out = set()
    for cyc in itertools.permutations(range(g.n), 5):
        if all(g.has_edge(cyc[t], cyc[(t + 1) % 5]) for t in range(5)) and all(
                p is None or d[x, v] == p for v, p in zip(cyc, pattern)):
            out.add(cyc)
    return out
