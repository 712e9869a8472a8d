"""Seeded random polyline drawings for tests and experiments.

Randomness comes from CPython's MT19937 (``random.Random(seed)``) and only its
raw ``getrandbits`` output is consumed; integer ranges use rejection
sampling on those bits, so a corpus can be reproduced by any MT19937 port
that seeds the same way.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction

from .geometry import DegenerateDrawingError, GeoDrawing, GeoEdge, ingest, orient

FAMILIES = ("complete", "bipartite", "random")
DEFAULT_BOX = 100_000


class _Bits:
    def __init__(self, seed: int):
        self._rng = random.Random(seed)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("empty range")
        k = max(n - 1, 1).bit_length()
        while True:
            r = self._rng.getrandbits(k)
            if r < n:
                return r

    def chance(self, p: Fraction) -> bool:
        return self._rng.getrandbits(32) < p * (1 << 32)


def family_edges(family: str, params, bits: _Bits | None = None) -> tuple[int, list[tuple[int, int]]]:
    if family == "complete":
        (n,) = params
        n = int(n)
        if n < 1:
            raise ValueError("complete graph needs n >= 1")
        return n, [(i, j) for i in range(n) for j in range(i + 1, n)]
    if family == "bipartite":
        a, b = (int(x) for x in params)
        if a < 1 or b < 1:
            raise ValueError("complete bipartite graph needs a, b >= 1")
        return a + b, [(i, a + j) for i in range(a) for j in range(b)]
    if family == "random":
        n, p = params
        n, p = int(n), Fraction(p)
        if n < 1 or not 0 <= p <= 1:
            raise ValueError("random graph needs n >= 1 and 0 <= p <= 1")
        return n, [(i, j) for i in range(n) for j in range(i + 1, n) if bits.chance(p)]
    raise ValueError(f"unknown graph family {family!r}; expected one of {FAMILIES}")


def _convex_points(n: int, bits: _Bits, box: int):
    r = box // 2
    slot = 2 * math.pi / n
    pts = []
    for i in range(n):
        theta = slot * i + slot * bits.below(1 << 16) / (1 << 17)
        pts.append((round(r + r * math.cos(theta)), round(r + r * math.sin(theta))))
    if n >= 3 and any(orient(pts[i], pts[(i + 1) % n], pts[(i + 2) % n]) <= 0 for i in range(n)):
        return None
    return pts


def gen_random(family: str, params, *, detour: int = 0, convex: bool = False,
               seed: int = 0, box: int = DEFAULT_BOX, max_tries: int = 200) -> GeoDrawing:
    """Random drawing of a graph family.

    ``detour`` > 0 gives every edge up to that many random via-points, which
    produces repeated crossings and self-crossings.  Degenerate samples are
    redrawn from the same stream, at most ``max_tries`` times.
    """
    if detour < 0:
        raise ValueError("detour must be >= 0")
    bits = _Bits(seed)
    n, edges = family_edges(family, params, bits)
    for _ in range(max_tries):
        if convex:
            pts = _convex_points(n, bits, box)
            if pts is None:
                continue
        else:
            pts = [(bits.below(box + 1), bits.below(box + 1)) for _ in range(n)]
        geo_edges = []
        for t, h in edges:
            k = bits.below(detour + 1) if detour else 0
            via = tuple((Fraction(bits.below(box + 1)), Fraction(bits.below(box + 1)))
                        for _ in range(k))
            geo_edges.append(GeoEdge(t, h, via))
        g = GeoDrawing(tuple((Fraction(x), Fraction(y)) for x, y in pts), tuple(geo_edges))
        try:
            ingest(g)
        except DegenerateDrawingError:
            continue
        return g
    raise RuntimeError(f"no non-degenerate {family}{tuple(params)} drawing after {max_tries} tries")
