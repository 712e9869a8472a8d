# cython: language_level=3
"""Compiled counterparts of ``_pykernels`` (same signatures, same results)."""
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_popcountll(unsigned long long)
    int __builtin_ctzll(unsigned long long)


cdef inline int _find(int64_t* parent, int64_t u) noexcept:
    while parent[u] != u:
        parent[u] = parent[parent[u]]
        u = parent[u]
    return u


cdef int _place(int64_t* succ, int64_t* origin, int64_t node,
                int64_t* cyc, int k) noexcept:
    cdef int i
    for i in range(k):
        if origin[cyc[i]] != -1:
            return -1
        origin[cyc[i]] = node
        succ[cyc[i]] = cyc[(i + 1) % k]
    return 0


def euler_counts(int64_t n_vertices, route_offsets, route_flat, xa, xb, xsign,
                 rot_offsets, rot_ends):
    cdef int64_t n_edges = len(route_offsets) - 1
    cdef int64_t n_slots = len(route_flat)
    cdef int64_t n_cross = len(xsign)
    cdef int64_t n_darts = 2 * (n_slots + n_edges)
    cdef int64_t n_nodes = n_vertices + n_cross
    cdef int64_t n_ends = len(rot_ends)
    cdef int64_t *off = <int64_t*> malloc((n_edges + 1) * sizeof(int64_t))
    cdef int64_t *slot_edge = <int64_t*> malloc((n_slots + 1) * sizeof(int64_t))
    cdef int64_t *succ = <int64_t*> malloc((n_darts + 1) * sizeof(int64_t))
    cdef int64_t *origin = <int64_t*> malloc((n_darts + 1) * sizeof(int64_t))
    cdef int64_t *parent = <int64_t*> malloc((n_nodes + 1) * sizeof(int64_t))
    cdef int64_t *cyc = <int64_t*> malloc((n_ends + 4) * sizeof(int64_t))
    cdef unsigned char *seen = <unsigned char*> malloc(n_darts + n_nodes + 1)
    cdef int64_t e, p, v, i, k, ref, c, pa, pb, ea, eb, d, x, ru, rv
    cdef int64_t faces = 0, comps = 0, touched = 0
    cdef int bad = 0
    try:
        for e in range(n_edges + 1):
            off[e] = route_offsets[e]
        for e in range(n_edges):
            for p in range(off[e], off[e + 1]):
                slot_edge[p] = e
        for d in range(n_darts):
            origin[d] = -1
            succ[d] = -1
        for v in range(n_vertices):
            k = 0
            for i in range(rot_offsets[v], rot_offsets[v + 1]):
                ref = rot_ends[i]
                e = ref >> 1
                if ref & 1:
                    cyc[k] = 2 * (off[e + 1] + e) + 1
                else:
                    cyc[k] = 2 * (off[e] + e)
                k += 1
            if _place(succ, origin, v, cyc, <int>k) < 0:
                bad = 1
                break
        if not bad:
            for c in range(n_cross):
                pa = xa[c]
                pb = xb[c]
                ea = slot_edge[pa]
                eb = slot_edge[pb]
                cyc[0] = 2 * (pa + ea + 1)
                cyc[2] = 2 * (pa + ea) + 1
                if xsign[c] > 0:
                    cyc[1] = 2 * (pb + eb + 1)
                    cyc[3] = 2 * (pb + eb) + 1
                else:
                    cyc[1] = 2 * (pb + eb) + 1
                    cyc[3] = 2 * (pb + eb + 1)
                if _place(succ, origin, n_vertices + c, cyc, 4) < 0:
                    bad = 1
                    break
        if bad:
            raise ValueError("dart claimed twice")
        for d in range(n_darts):
            if origin[d] == -1:
                raise ValueError(f"dart {d} has no rotation entry")

        for d in range(n_darts):
            seen[d] = 0
        for d in range(n_darts):
            if seen[d]:
                continue
            faces += 1
            x = d
            while not seen[x]:
                seen[x] = 1
                x = succ[x ^ 1]

        for v in range(n_nodes):
            parent[v] = v
            seen[v] = 0
        for x in range(n_darts // 2):
            ru = _find(parent, origin[2 * x])
            rv = _find(parent, origin[2 * x + 1])
            if ru != rv:
                parent[ru] = rv
        for d in range(n_darts):
            seen[origin[d]] = 1
        for v in range(n_nodes):
            if seen[v]:
                touched += 1
                if _find(parent, v) == v:
                    comps += 1
        return faces, comps, n_nodes - touched
    finally:
        free(off)
        free(slot_edge)
        free(succ)
        free(origin)
        free(parent)
        free(cyc)
        free(seen)


cdef inline int _popcount(uint64_t x) noexcept:
    return __builtin_popcountll(x)


cdef int _packable(uint64_t* adj, uint64_t rem, int cap) noexcept:
    cdef int total = _popcount(rem)
    cdef uint64_t sums = 1, low, comp, frontier, nb, f, b
    cdef int side
    while rem:
        low = rem & (~rem + 1)
        comp = low
        frontier = low
        while frontier:
            nb = 0
            f = frontier
            while f:
                b = f & (~f + 1)
                nb |= adj[__builtin_ctzll(b)]
                f ^= b
            frontier = nb & rem & ~comp
            comp |= frontier
        rem &= ~comp
        sums |= sums << _popcount(comp)
    for side in range((total + 1) // 2, cap + 1):
        if (sums >> side) & 1:
            return side
    return -1


def min_separator_mask(adj, int cap):
    cdef int n = len(adj)
    if n > 63:
        raise ValueError("exact separator kernel supports at most 63 vertices")
    cdef uint64_t cadj[64]
    cdef int idx[64]
    cdef int i, j, size, side, best_side, even
    cdef uint64_t full = (<uint64_t>1 << n) - 1, mask, best
    cdef bint found
    for i in range(n):
        cadj[i] = adj[i]
    for size in range(n + 1):
        for i in range(size):
            idx[i] = i
        found = False
        best = 0
        best_side = cap + 1
        even = (n - size + 1) // 2
        while True:
            mask = 0
            for i in range(size):
                mask |= <uint64_t>1 << idx[i]
            side = _packable(cadj, full & ~mask, cap)
            if 0 <= side < best_side:
                best, best_side, found = mask, side, True
                if side == even:
                    break
            # next combination in lexicographic order
            i = size - 1
            while i >= 0 and idx[i] == n - size + i:
                i -= 1
            if i < 0:
                break
            idx[i] += 1
            for j in range(i + 1, size):
                idx[j] = idx[j - 1] + 1
        if found:
            return int(best)
    return int(full)
