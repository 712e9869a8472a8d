"""Small hand-placed geometric drawings."""
from fractions import Fraction

from untangle.geometry import GeoDrawing, GeoEdge


def geo(points, edges) -> GeoDrawing:
    pts = tuple((Fraction(x), Fraction(y)) for x, y in points)
    out = []
    for item in edges:
        t, h, *rest = item
        via = tuple((Fraction(x), Fraction(y)) for x, y in (rest[0] if rest else ()))
        out.append(GeoEdge(t, h, via))
    return GeoDrawing(pts, tuple(out))


def x_drawing():
    return geo([(0, 0), (10, 10), (0, 10), (10, 0)], [(0, 1), (2, 3)])


def double_crossing():
    # edge 1 arches over edge 0 and comes back down
    return geo([(0, 0), (20, 0), (2, -5), (18, -5)], [(0, 1), (2, 3, [(4, 5), (16, 5)])])


def triple_crossing():
    return geo([(0, 0), (20, 0), (2, -5), (8, 5)], [(0, 1), (2, 3, [(4, 5), (6, -5)])])


def self_loop():
    return geo([(0, 0), (0, 10)], [(0, 1, [(10, 10), (10, 0)])])


def loop_with_visitor():
    # the loop of edge 0 encloses a bend of edge 1, which crosses it twice
    return geo([(0, 0), (0, 10), (12, 2), (12, 8)],
               [(0, 1, [(10, 10), (10, 0)]), (2, 3, [(9, 5)])])


def arch_with_blue_posts():
    """Edges 0 and 1 cross twice; the arch of 1 between them is crossed by
    three short posts (edges 2, 3, 4) that stay clear of edge 0."""
    pts = [(0, 0), (20, 0), (2, -5), (18, -5),
           (8, 8), (8, 12), (10, 8), (10, 12), (12, 8), (12, 12)]
    edges = [(0, 1), (2, 3, [(4, 10), (16, 10)]), (4, 5), (6, 7), (8, 9)]
    return geo(pts, edges)


def convex_complete(n: int):
    from untangle.generate import gen_random
    return gen_random("complete", (n,), convex=True, seed=0)


def triangle():
    return geo([(0, 0), (4, 0), (0, 4)], [(0, 1), (1, 2), (0, 2)])
