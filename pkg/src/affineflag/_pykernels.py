"""Pure numpy/scipy versions of the compiled kernels in ``_ckernels``.

Same signatures, same results.  Orbit closures expand whole BFS levels at
once instead of walking a queue.
"""

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path


def pair_orbit_closure(perms, seed, visited):
    perms = np.asarray(perms, dtype=np.int64)
    F = perms.shape[1]
    seed = int(seed)
    if not 0 <= seed < F * F:
        raise IndexError("seed code out of range")
    if visited[seed]:
        return np.empty(0, dtype=np.int64)
    visited[seed] = 1
    found = [np.array([seed], dtype=np.int64)]
    frontier = found[0]
    while frontier.size:
        a, b = np.divmod(frontier, F)
        images = np.unique((perms[:, a] * F + perms[:, b]).ravel())
        frontier = images[visited[images] == 0]
        visited[frontier] = 1
        found.append(frontier)
    return np.sort(np.concatenate(found))


def pair_orbit_labels(perms, mask):
    perms = np.asarray(perms, dtype=np.int64)
    F = perms.shape[1]
    mask = np.asarray(mask, dtype=bool)
    labels = np.full(F * F, -1, dtype=np.int64)
    visited = np.zeros(F * F, dtype=np.uint8)
    label = 0
    for start in np.flatnonzero(mask):
        if labels[start] >= 0:
            continue
        members = pair_orbit_closure(perms, start, visited)
        labels[members] = label
        label += 1
    labels[~mask] = -1
    return labels


def _csr(indptr, indices):
    n = len(indptr) - 1
    data = np.ones(len(indices), dtype=np.int8)
    return csr_matrix((data, np.asarray(indices), np.asarray(indptr)), shape=(n, n))


def bfs_eccentricity(indptr, indices):
    n = len(indptr) - 1
    if n == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    mat = _csr(indptr, indices)
    _, comp = connected_components(mat, directed=False)
    # relabel components by least vertex so labels match the compiled kernel
    order = {}
    relabeled = np.empty(n, dtype=np.int64)
    for v, c in enumerate(comp):
        relabeled[v] = order.setdefault(c, len(order))
    dist = shortest_path(mat, method="D", unweighted=True, directed=False)
    dist[np.isinf(dist)] = -1
    ecc = dist.max(axis=1).astype(np.int64)
    return ecc, relabeled


def girth(indptr, indices):
    indptr = np.asarray(indptr)
    indices = np.asarray(indices)
    n = len(indptr) - 1
    if n and triangle_counts(indptr, indices).any():
        return 3
    best = 0
    dist = np.full(n, -1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    for r in range(n):
        dist[r], parent[r] = 0, -1
        queue = [r]
        head = 0
        while head < len(queue):
            x = queue[head]
            head += 1
            if best and 2 * dist[x] + 1 >= best:
                break
            for y in indices[indptr[x]:indptr[x + 1]]:
                if y == parent[x]:
                    continue
                if dist[y] < 0:
                    dist[y], parent[y] = dist[x] + 1, x
                    queue.append(y)
                else:
                    cyc = dist[x] + dist[y] + 1
                    if best == 0 or cyc < best:
                        best = int(cyc)
        dist[queue] = -1
        parent[queue] = -1
        if best == 3:
            break
    return best


def triangle_counts(indptr, indices):
    n = len(indptr) - 1
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    adj = _csr(indptr, indices).toarray().astype(np.float64)
    # (A^2 * A) row sums count each triangle at a vertex twice
    return np.rint(((adj @ adj) * adj).sum(axis=1) / 2).astype(np.int64)
