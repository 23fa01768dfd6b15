# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: orbit closure on ordered flag pairs and BFS graph invariants.

Every function here has a drop-in twin in ``_pykernels``; results are
identical (orbits are returned sorted, so traversal order never leaks out).
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.uint8_t u8


def pair_orbit_closure(const i64[:, ::1] perms, i64 seed, u8[::1] visited):
    """Sorted codes ``a*F + b`` of the orbit of ``seed`` under the diagonal action.

    Codes already marked in ``visited`` are treated as explored; every newly
    reached code is marked.
    """
    cdef Py_ssize_t ngen = perms.shape[0]
    cdef i64 F = perms.shape[1]
    cdef i64 total = F * F
    cdef cnp.ndarray[i64, ndim=1] queue_arr = np.empty(64, dtype=np.int64)
    cdef i64[::1] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0, cap = 64
    cdef i64 code, a, b, img
    cdef Py_ssize_t g
    if seed < 0 or seed >= total:
        raise IndexError("seed code out of range")
    if visited[seed]:
        return np.empty(0, dtype=np.int64)
    visited[seed] = 1
    queue[tail] = seed
    tail += 1
    while head < tail:
        code = queue[head]
        head += 1
        a = code // F
        b = code - a * F
        for g in range(ngen):
            img = perms[g, a] * F + perms[g, b]
            if not visited[img]:
                visited[img] = 1
                if tail == cap:
                    cap *= 2
                    queue_arr = np.resize(queue_arr, cap)
                    queue = queue_arr
                queue[tail] = img
                tail += 1
    out = np.asarray(queue_arr[:tail]).copy()
    out.sort()
    return out


def pair_orbit_labels(const i64[:, ::1] perms, const u8[::1] mask):
    """Orbit label of every masked pair code (-1 elsewhere), numbered by least masked member."""
    cdef i64 F = perms.shape[1]
    cdef i64 total = F * F
    cdef Py_ssize_t ngen = perms.shape[0]
    cdef cnp.ndarray[i64, ndim=1] labels_arr = np.full(total, -1, dtype=np.int64)
    cdef i64[::1] labels = labels_arr
    cdef cnp.ndarray[i64, ndim=1] queue_arr = np.empty(total, dtype=np.int64)
    cdef i64[::1] queue = queue_arr
    cdef i64 start, code, a, b, img, label = 0
    cdef Py_ssize_t head, tail, g
    for start in range(total):
        if not mask[start] or labels[start] >= 0:
            continue
        labels[start] = label
        head = 0
        tail = 0
        queue[tail] = start
        tail += 1
        while head < tail:
            code = queue[head]
            head += 1
            a = code // F
            b = code - a * F
            for g in range(ngen):
                img = perms[g, a] * F + perms[g, b]
                if labels[img] < 0:
                    labels[img] = label
                    queue[tail] = img
                    tail += 1
        label += 1
    for start in range(total):
        if not mask[start]:
            labels[start] = -1
    return labels_arr


def bfs_eccentricity(const i64[::1] indptr, const i64[::1] indices):
    """Per-vertex eccentricity within its component, and component labels."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.ndarray[i64, ndim=1] ecc_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] comp_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] dist_arr = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] queue_arr = np.empty(max(n, 1), dtype=np.int64)
    cdef i64[::1] ecc = ecc_arr
    cdef i64[::1] comp = comp_arr
    cdef i64[::1] dist = dist_arr
    cdef i64[::1] queue = queue_arr
    cdef Py_ssize_t r, head, tail, x, y, j
    cdef i64 label = 0, far
    for r in range(n):
        for x in range(n):
            dist[x] = -1
        dist[r] = 0
        head = 0
        tail = 0
        queue[tail] = r
        tail += 1
        far = 0
        while head < tail:
            x = queue[head]
            head += 1
            if dist[x] > far:
                far = dist[x]
            for j in range(indptr[x], indptr[x + 1]):
                y = indices[j]
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    queue[tail] = y
                    tail += 1
        ecc[r] = far
        if comp[r] < 0:
            for j in range(tail):
                comp[queue[j]] = label
            label += 1
    return ecc_arr, comp_arr


def girth(const i64[::1] indptr, const i64[::1] indices):
    """Length of a shortest cycle, 0 when the graph is a forest."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.ndarray[i64, ndim=1] dist_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] parent_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] queue_arr = np.empty(max(n, 1), dtype=np.int64)
    cdef i64[::1] dist = dist_arr
    cdef i64[::1] parent = parent_arr
    cdef i64[::1] queue = queue_arr
    cdef i64 best = 0, cyc
    cdef Py_ssize_t r, head, tail, x, y, j, t
    for r in range(n):
        head = 0
        tail = 0
        dist[r] = 0
        parent[r] = -1
        queue[tail] = r
        tail += 1
        while head < tail:
            x = queue[head]
            head += 1
            # no cycle through r found later can beat the current best
            if best and 2 * dist[x] + 1 >= best:
                break
            for j in range(indptr[x], indptr[x + 1]):
                y = indices[j]
                if y == parent[x]:
                    continue
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue[tail] = y
                    tail += 1
                else:
                    cyc = dist[x] + dist[y] + 1
                    if best == 0 or cyc < best:
                        best = cyc
        for t in range(tail):
            dist[queue[t]] = -1
            parent[queue[t]] = -1
        if best == 3:
            break
    return best


cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil

# neighbour bitsets cost n*n/8 bytes; above this order fall back to list merging
cdef Py_ssize_t BITSET_MAX_ORDER = 20000


def triangle_counts(const i64[::1] indptr, const i64[::1] indices):
    """Number of triangles through each vertex (sorted neighbour lists required)."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.ndarray[i64, ndim=1] out_arr = np.zeros(n, dtype=np.int64)
    cdef i64[::1] out = out_arr
    cdef Py_ssize_t x, y, j, w, a, b, ea, eb, words
    cdef i64 cnt
    cdef unsigned long long[:, ::1] bits
    if n <= BITSET_MAX_ORDER:
        words = (n + 63) // 64
        bits = np.zeros((n, words), dtype=np.uint64)
        for x in range(n):
            for j in range(indptr[x], indptr[x + 1]):
                y = indices[j]
                bits[x, y >> 6] |= 1ULL << (y & 63)
    for x in range(n):
        for j in range(indptr[x], indptr[x + 1]):
            y = indices[j]
            if y <= x:
                continue
            cnt = 0
            if n <= BITSET_MAX_ORDER:
                for w in range(words):
                    cnt += popcount64(bits[x, w] & bits[y, w])
            else:
                a = indptr[x]
                ea = indptr[x + 1]
                b = indptr[y]
                eb = indptr[y + 1]
                while a < ea and b < eb:
                    if indices[a] < indices[b]:
                        a += 1
                    elif indices[a] > indices[b]:
                        b += 1
                    else:
                        cnt += 1
                        a += 1
                        b += 1
            out[x] += cnt
            out[y] += cnt
    # each triangle xyz was counted once on each of its three edges, and each
    # edge credits both endpoints: a vertex collects 2 per triangle
    for x in range(n):
        out[x] //= 2
    return out_arr
