"""Reference computations that share no code with the package.

Each oracle is deliberately naive: quadratic segment tests with Fractions,
subset enumeration for separators, and networkx's own planar-embedding
checker for the face structure of a planarization.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations

import networkx as nx


def _det(o, p, q):
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])


def _proper(p1, p2, q1, q2) -> bool:
    d1, d2 = _det(p1, p2, q1), _det(p1, p2, q2)
    d3, d4 = _det(q1, q2, p1), _det(q1, q2, p2)
    return d1 * d2 < 0 and d3 * d4 < 0


def polylines(points, edges):
    """``edges`` as (tail, head, via) triples -> list of Fraction point lists."""
    out = []
    for t, h, via in edges:
        pts = [points[t], *via, points[h]]
        out.append([(Fraction(x), Fraction(y)) for x, y in pts])
    return out


def crossing_pairs(points, edges) -> Counter:
    """Multiset of crossing edge pairs (e, f), e <= f, by brute force.

    Only transversal interior crossings are counted; the inputs are assumed
    free of touchings, which is what the generators guarantee.
    """
    lines = polylines(points, edges)
    segs = [(e, j, pl[j], pl[j + 1]) for e, pl in enumerate(lines) for j in range(len(pl) - 1)]
    out: Counter = Counter()
    for (e, i, a, b), (f, j, c, d) in combinations(segs, 2):
        if e == f and abs(i - j) <= 1:
            continue
        if _proper(a, b, c, d):
            out[(min(e, f), max(e, f))] += 1
    return out


def convex_complete_crossings(n: int) -> int:
    """Crossings of K_n with vertices in convex position: one per 4-subset."""
    return sum(1 for _ in combinations(range(n), 4))


# -- separators ------------------------------------------------------------

def _components(vertices, adj, removed):
    left = set(vertices) - set(removed)
    comps = []
    while left:
        s = min(left)
        comp, todo = {s}, [s]
        while todo:
            u = todo.pop()
            for w in adj[u]:
                if w in left and w not in comp:
                    comp.add(w)
                    todo.append(w)
        left -= comp
        comps.append(comp)
    return comps


def _best_split(sizes, cap):
    """Smallest achievable larger side, or None if nothing fits."""
    total = sum(sizes)
    best = None
    for r in range(len(sizes) + 1):
        for pick in combinations(range(len(sizes)), r):
            one = sum(sizes[i] for i in pick)
            if one <= cap and total - one <= cap:
                side = max(one, total - one)
                best = side if best is None else min(best, side)
    return best


def best_separator(vertices, adj) -> tuple[int, int]:
    """(smallest |F0|, smallest larger side among those) such that the
    rest splits into two sides of size at most floor(2n/3) with no edges
    between them."""
    vertices = sorted(vertices)
    cap = (2 * len(vertices)) // 3
    for size in range(len(vertices) + 1):
        sides = [_best_split([len(c) for c in _components(vertices, adj, f0)], cap)
                 for f0 in combinations(vertices, size)]
        sides = [s for s in sides if s is not None]
        if sides:
            return size, min(sides)
    raise AssertionError("unreachable: removing everything always works")


def min_separator_size(vertices, adj) -> int:
    return best_separator(vertices, adj)[0]


# -- planarization ---------------------------------------------------------

def planarization_embedding(d) -> nx.PlanarEmbedding:
    """Embedding of the planarization with every segment subdivided twice.

    Built straight from routes, crossing signs and vertex rotations; the
    caller decides whether networkx accepts it as planar.
    """
    emb = nx.PlanarEmbedding()
    ccw = {("v", v): [] for v in range(d.n_vertices)}

    def node(e, i):
        r = d.routes[e]
        if i == 0:
            return ("v", d.graph.edges[e][0])
        if i == len(r) + 1:
            return ("v", d.graph.edges[e][1])
        return ("x", r[i - 1])

    for e in range(d.n_edges):
        n_seg = len(d.routes[e]) + 1
        for j in range(n_seg):
            ccw[("s", e, j, 0)] = [node(e, j), ("s", e, j, 1)]
            ccw[("s", e, j, 1)] = [("s", e, j, 0), node(e, j + 1)]
    for v, rot in enumerate(d.rotations):
        for e, end in rot:
            j = 0 if end == 0 else len(d.routes[e])
            ccw[("v", v)].append(("s", e, j, end))
    for cid, c in d.crossings.items():
        fwd_a, back_a = ("s", c.a, c.ai + 1, 0), ("s", c.a, c.ai, 1)
        fwd_b, back_b = ("s", c.b, c.bi + 1, 0), ("s", c.b, c.bi, 1)
        # b enters from the right of a when sign is +1
        ccw[("x", cid)] = ([fwd_a, fwd_b, back_a, back_b] if c.sign == 1
                           else [fwd_a, back_b, back_a, fwd_b])
    emb.set_data({k: list(reversed(v)) for k, v in ccw.items()})
    return emb


def is_plane_planarization(d) -> bool:
    try:
        planarization_embedding(d).check_structure()
    except (nx.NetworkXException, KeyError):
        return False
    return True


def face_count(d) -> int:
    """Faces of the planarization, one per connected component's outer face."""
    emb = planarization_embedding(d)
    seen = set()
    faces = 0
    for u, v in emb.edges():
        if (u, v) not in seen:
            emb.traverse_face(u, v, mark_half_edges=seen)
            faces += 1
    return faces
