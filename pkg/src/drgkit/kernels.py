"""Hot inner loops.

Every kernel exists twice: a loop version compiled by numba (suffix ``_nb``)
and a vectorised numpy version (suffix ``_np``).  The public names pick one
according to :data:`drgkit._accel.USE_NUMBA`.  Both versions take the raw CSR
arrays of a :class:`drgkit.graph.Graph` so they stay free of Python objects.

Distances are ``int32`` with ``-1`` meaning unreachable.
"""

from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, njit

UNREACHABLE = -1


# ---------------------------------------------------------------------------
# breadth-first search
# ---------------------------------------------------------------------------

@njit
def bfs_nb(indptr, indices, source):
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, dtype=np.int32)
    queue = np.empty(n, dtype=np.int64)
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if dist[v] < 0:
                dist[v] = du
                queue[tail] = v
                tail += 1
    return dist


def bfs_np(indptr, indices, source):
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, dtype=np.int32)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        starts = indptr[frontier]
        counts = indptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            break
        # flat positions of all neighbours of the frontier
        offsets = np.repeat(starts - np.cumsum(counts) + counts, counts)
        pos = offsets + np.arange(total)
        nbrs = indices[pos]
        nbrs = np.unique(nbrs[dist[nbrs] < 0])
        dist[nbrs] = level
        frontier = nbrs.astype(np.int64)
    return dist


@njit
def multi_bfs_nb(indptr, indices, sources):
    n = indptr.shape[0] - 1
    out = np.empty((sources.shape[0], n), dtype=np.int32)
    for r in range(sources.shape[0]):
        out[r] = bfs_nb(indptr, indices, sources[r])
    return out


def multi_bfs_np(indptr, indices, sources):
    n = indptr.shape[0] - 1
    out = np.empty((len(sources), n), dtype=np.int32)
    for r, s in enumerate(sources):
        out[r] = bfs_np(indptr, indices, int(s))
    return out


# ---------------------------------------------------------------------------
# per-vertex layer counts relative to one distance row
# ---------------------------------------------------------------------------

@njit
def layer_counts_nb(indptr, indices, dist):
    """counts[y] = (#nbrs one layer closer, #same layer, #one layer further)."""
    n = indptr.shape[0] - 1
    counts = np.zeros((n, 3), dtype=np.int32)
    for y in range(n):
        dy = dist[y]
        if dy < 0:
            continue
        for p in range(indptr[y], indptr[y + 1]):
            dv = dist[indices[p]]
            if dv == dy - 1:
                counts[y, 0] += 1
            elif dv == dy:
                counts[y, 1] += 1
            elif dv == dy + 1:
                counts[y, 2] += 1
    return counts


def layer_counts_np(indptr, indices, dist):
    n = indptr.shape[0] - 1
    src = np.repeat(np.arange(n), np.diff(indptr))
    ds = dist[src]
    diff = dist[indices] - ds
    ok = ds >= 0
    counts = np.zeros((n, 3), dtype=np.int32)
    for col, delta in enumerate((-1, 0, 1)):
        sel = ok & (diff == delta)
        counts[:, col] = np.bincount(src[sel], minlength=n)
    return counts


# ---------------------------------------------------------------------------
# one round of the weak-geodetic closure
# ---------------------------------------------------------------------------

@njit
def closure_round_nb(rows, members, new_pos):
    """Mask of vertices y with d(x,y)+d(y,z) <= d(x,z)+1 for a member x and a
    freshly added member z (``rows[r]`` is the distance row of ``members[r]``)."""
    m, n = rows.shape
    mask = np.zeros(n, dtype=np.bool_)
    for jj in range(new_pos.shape[0]):
        j = new_pos[jj]
        rz = rows[j]
        for i in range(m):
            rx = rows[i]
            bound = rx[members[j]] + 1
            for y in range(n):
                a = rx[y]
                b = rz[y]
                if a >= 0 and b >= 0 and a + b <= bound:
                    mask[y] = True
    return mask


def closure_round_np(rows, members, new_pos):
    m, n = rows.shape
    mask = np.zeros(n, dtype=bool)
    reach = rows >= 0
    for j in new_pos:
        bound = rows[:, members[j]].astype(np.int64) + 1
        ok = reach & reach[j]
        hit = ok & (rows + rows[j] <= bound[:, None])
        mask |= hit.any(axis=0)
    return mask


# ---------------------------------------------------------------------------
# vertices lying on a geodesic from the BFS root to a target set
# ---------------------------------------------------------------------------

@njit
def interval_mark_nb(indptr, indices, dist, target):
    n = indptr.shape[0] - 1
    order = np.argsort(-dist.astype(np.int64), kind="mergesort")
    mark = target.copy()
    for t in range(n):
        v = order[t]
        dv = dist[v]
        if dv < 0 or mark[v]:
            continue
        for p in range(indptr[v], indptr[v + 1]):
            w = indices[p]
            if dist[w] == dv + 1 and mark[w]:
                mark[v] = True
                break
    for v in range(n):
        if dist[v] < 0:
            mark[v] = False
    return mark


def interval_mark_np(indptr, indices, dist, target):
    n = indptr.shape[0] - 1
    src = np.repeat(np.arange(n), np.diff(indptr))
    down = (dist[src] >= 0) & (dist[indices] == dist[src] + 1)
    eu = src[down]
    ev = indices[down]
    du = dist[eu]
    mark = target.copy() & (dist >= 0)
    if dist.max() < 0:
        return mark
    for level in range(int(dist.max()) - 1, -1, -1):
        sel = du == level
        hit = eu[sel][mark[ev[sel]]]
        mark[hit] = True
    return mark


# ---------------------------------------------------------------------------
# parallelogram scan over a dense distance matrix
# ---------------------------------------------------------------------------

@njit
def parallelograms_nb(indptr, indices, dmat, length, first_only):
    n = indptr.shape[0] - 1
    out = []
    for x in range(n):
        dx = dmat[x]
        for p in range(indptr[x], indptr[x + 1]):
            y = indices[p]
            dy = dmat[y]
            for z in range(n):
                if dx[z] != length or dy[z] != length - 1:
                    continue
                for q in range(indptr[z], indptr[z + 1]):
                    w = indices[q]
                    if dx[w] == length - 1 and dy[w] == length - 1:
                        out.append((x, y, z, w))
                        if first_only:
                            return out
    return out


def parallelograms_np(indptr, indices, dmat, length, first_only):
    n = indptr.shape[0] - 1
    out = []
    for x in range(n):
        dx = dmat[x]
        for y in indices[indptr[x]:indptr[x + 1]]:
            dy = dmat[y]
            wmask = (dx == length - 1) & (dy == length - 1)
            for z in np.flatnonzero((dx == length) & (dy == length - 1)):
                nb = indices[indptr[z]:indptr[z + 1]]
                for w in nb[wmask[nb]]:
                    out.append((x, int(y), int(z), int(w)))
                    if first_only:
                        return out
    return out


if USE_NUMBA:
    bfs = bfs_nb
    multi_bfs = multi_bfs_nb
    layer_counts = layer_counts_nb
    closure_round = closure_round_nb
    interval_mark = interval_mark_nb
    parallelograms = parallelograms_nb
else:
    bfs = bfs_np
    multi_bfs = multi_bfs_np
    layer_counts = layer_counts_np
    closure_round = closure_round_np
    interval_mark = interval_mark_np
    parallelograms = parallelograms_np
