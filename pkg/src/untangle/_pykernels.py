"""Pure-Python kernels.

Reference implementations of the two hot loops. ``_ckernels.pyx`` mirrors
these function for function; ``untangle.kernels`` picks whichever imports.

Planarization layout shared by both backends
--------------------------------------------
Edge ``e`` with route slots ``route_flat[off[e]:off[e+1]]`` is cut into
``len + 1`` segments numbered ``off[e] + e + j``.  Segment ``s`` owns darts
``2s`` (towards the head) and ``2s + 1`` (towards the tail).  Nodes are the
graph vertices ``0..n-1`` followed by one node per crossing.
"""
from itertools import combinations


def dart_successors(n_vertices, route_offsets, route_flat, xa, xb, xsign,
                    rot_offsets, rot_ends):
    """Build the ccw successor of every dart around its origin node.

    Returns ``(succ, origin)``.  Raises ValueError if a dart is claimed twice
    or left without a rotation entry.
    """
    n_edges = len(route_offsets) - 1
    n_darts = 2 * (len(route_flat) + n_edges)
    succ = [-1] * n_darts
    origin = [-1] * n_darts
    slot_edge = [0] * len(route_flat)
    for e in range(n_edges):
        for p in range(route_offsets[e], route_offsets[e + 1]):
            slot_edge[p] = e

    def place(node, cyc):
        k = len(cyc)
        for i, dart in enumerate(cyc):
            if origin[dart] != -1:
                raise ValueError(f"dart {dart} claimed twice")
            origin[dart] = node
            succ[dart] = cyc[(i + 1) % k]

    for v in range(n_vertices):
        cyc = []
        for ref in rot_ends[rot_offsets[v]:rot_offsets[v + 1]]:
            e = ref >> 1
            if ref & 1:
                cyc.append(2 * (route_offsets[e + 1] + e) + 1)
            else:
                cyc.append(2 * (route_offsets[e] + e))
        place(v, cyc)

    for c in range(len(xsign)):
        pa, pb = xa[c], xb[c]
        ea, eb = slot_edge[pa], slot_edge[pb]
        a_out, a_back = 2 * (pa + ea + 1), 2 * (pa + ea) + 1
        b_out, b_back = 2 * (pb + eb + 1), 2 * (pb + eb) + 1
        if xsign[c] > 0:
            place(n_vertices + c, (a_out, b_out, a_back, b_back))
        else:
            place(n_vertices + c, (a_out, b_back, a_back, b_out))

    if -1 in origin:
        raise ValueError(f"dart {origin.index(-1)} has no rotation entry")
    return succ, origin


def euler_counts(n_vertices, route_offsets, route_flat, xa, xb, xsign,
                 rot_offsets, rot_ends):
    """Return ``(faces, components_with_darts, isolated_nodes)``."""
    succ, origin = dart_successors(n_vertices, route_offsets, route_flat,
                                   xa, xb, xsign, rot_offsets, rot_ends)
    n_darts = len(succ)
    seen = bytearray(n_darts)
    faces = 0
    for d in range(n_darts):
        if seen[d]:
            continue
        faces += 1
        x = d
        while not seen[x]:
            seen[x] = 1
            x = succ[x ^ 1]

    n_nodes = n_vertices + len(xsign)
    parent = list(range(n_nodes))

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for s in range(n_darts // 2):
        ru, rv = find(origin[2 * s]), find(origin[2 * s + 1])
        if ru != rv:
            parent[ru] = rv
    touched = set(origin)
    roots = {find(u) for u in touched}
    return faces, len(roots), n_nodes - len(touched)


def _packable(adj, rem, cap):
    """Smallest possible larger side when the components of ``rem`` are
    split in two sides of at most ``cap``; -1 if no split fits."""
    total = bin(rem).count("1")
    sums = 1
    while rem:
        low = rem & -rem
        comp = frontier = low
        while frontier:
            nb = 0
            f = frontier
            while f:
                b = f & -f
                nb |= adj[b.bit_length() - 1]
                f ^= b
            frontier = nb & rem & ~comp
            comp |= frontier
        rem &= ~comp
        sums |= sums << bin(comp).count("1")
    # achievable side sizes are symmetric about total/2
    for side in range((total + 1) // 2, cap + 1):
        if sums >> side & 1:
            return side
    return -1


def min_separator_mask(adj, cap):
    """Minimum vertex set whose removal leaves the rest packable into two
    sides of at most ``cap`` vertices with no edge between them.

    Among minimum sets the most even split wins, then the lexicographically
    first set.  ``adj[i]`` is the neighbour bitmask of vertex ``i``.
    """
    n = len(adj)
    full = (1 << n) - 1
    for size in range(n + 1):
        best, best_side = -1, cap + 1
        even = (n - size + 1) // 2
        for combo in combinations(range(n), size):
            mask = 0
            for i in combo:
                mask |= 1 << i
            side = _packable(adj, full & ~mask, cap)
            if 0 <= side < best_side:
                best, best_side = mask, side
                if side == even:
                    break
        if best >= 0:
            return best
    return full
