"""Polyline drawings with exact rational coordinates, and their planarization.

All predicates run on integers: coordinates are scaled by the common
denominator before any orientation test, so results never depend on
floating-point rounding.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from .drawing import HEAD, TAIL, Drawing, DrawingFormatError, SimpleGraph, assemble

Point = tuple[Fraction, Fraction]


class DegenerateDrawingError(ValueError):
    """The drawing violates general position (touching, overlap, triple point...)."""


@dataclass(frozen=True)
class GeoEdge:
    tail: int
    head: int
    via: tuple[Point, ...] = ()


@dataclass(frozen=True)
class GeoDrawing:
    points: tuple[Point, ...]
    edges: tuple[GeoEdge, ...]

    @property
    def graph(self) -> SimpleGraph:
        return SimpleGraph(len(self.points), tuple((e.tail, e.head) for e in self.edges))

    def polyline(self, e: int) -> list[Point]:
        edge = self.edges[e]
        return [self.points[edge.tail], *edge.via, self.points[edge.head]]


# -- file format -----------------------------------------------------------

def format_rational(q: Fraction) -> str:
    """Integer, exact decimal, or ``p/q`` string, whichever is exact and shortest."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = abs(q.numerator) * 10 ** digits // q.denominator
    sign = "-" if q < 0 else ""
    whole, frac = divmod(scaled, 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def parse_rational(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise DrawingFormatError(f"coordinate {value!r} must be an integer or rational string")
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise DrawingFormatError(f"bad rational coordinate {value!r}") from None


def to_json(g: GeoDrawing) -> dict:
    return {
        "vertices": [{"id": i, "x": format_rational(x), "y": format_rational(y)}
                     for i, (x, y) in enumerate(g.points)],
        "edges": [{"id": i, "tail": e.tail, "head": e.head,
                   "via": [[format_rational(x), format_rational(y)] for x, y in e.via]}
                  for i, e in enumerate(g.edges)],
    }


def dumps(g: GeoDrawing) -> str:
    return json.dumps(to_json(g), indent=1, sort_keys=True) + "\n"


def from_json(obj: dict) -> GeoDrawing:
    try:
        verts = sorted(obj["vertices"], key=lambda v: v["id"])
        edges = sorted(obj["edges"], key=lambda e: e["id"])
        vmap = {v["id"]: i for i, v in enumerate(verts)}
        if len(vmap) != len(verts):
            raise DrawingFormatError("duplicate vertex ids")
        points = tuple((parse_rational(v["x"]), parse_rational(v["y"])) for v in verts)
        out = []
        for item in edges:
            if item["tail"] not in vmap or item["head"] not in vmap:
                raise DrawingFormatError(f"edge {item['id']} references an unknown vertex")
            via = tuple((parse_rational(x), parse_rational(y)) for x, y in item.get("via", []))
            out.append(GeoEdge(vmap[item["tail"]], vmap[item["head"]], via))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DrawingFormatError):
            raise
        raise DrawingFormatError(f"malformed geometric drawing: {exc!r}") from None
    return GeoDrawing(points, tuple(out))


def loads(text: str) -> GeoDrawing:
    try:
        return from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise DrawingFormatError(f"not JSON: {exc}") from None


def read(path) -> GeoDrawing:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write(g: GeoDrawing, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(g))


# -- exact predicates ------------------------------------------------------

def orient(p, q, r) -> int:
    """+1 if p, q, r turn counter-clockwise, -1 clockwise, 0 collinear."""
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (v > 0) - (v < 0)


def _on_segment(p, q, r) -> bool:
    """r lies on the closed segment pq (collinearity already known)."""
    return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and \
        min(p[1], q[1]) <= r[1] <= max(p[1], q[1])


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _half(v) -> int:
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _ccw_cmp(u, v) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    c = _cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


def _scale(g: GeoDrawing):
    dens = [q.denominator for p in g.points for q in p]
    dens += [q.denominator for e in g.edges for p in e.via for q in p]
    scale = math.lcm(*dens) if dens else 1

    def conv(p):
        return (int(p[0] * scale), int(p[1] * scale))

    return scale, conv


@dataclass
class _Seg:
    edge: int
    j: int
    p: tuple[int, int]
    q: tuple[int, int]
    last: bool


def _fmt_point(p, scale) -> str:
    return f"({format_rational(Fraction(p[0], scale))}, {format_rational(Fraction(p[1], scale))})"


def ingest_with_points(g: GeoDrawing) -> tuple[Drawing, dict[int, Point]]:
    """Planarize ``g``; also return each crossing's exact location."""
    graph = g.graph
    seen_pairs = {}
    for i, (t, h) in enumerate(graph.edges):
        if t == h:
            raise DegenerateDrawingError(f"edge {i} is a loop at vertex {t}")
        key = frozenset((t, h))
        if key in seen_pairs:
            raise DegenerateDrawingError(f"edges {seen_pairs[key]} and {i} are parallel")
        seen_pairs[key] = i

    scale, conv = _scale(g)
    verts = [conv(p) for p in g.points]
    where = {}
    for v, p in enumerate(verts):
        if p in where:
            raise DegenerateDrawingError(
                f"vertices {where[p]} and {v} coincide at {_fmt_point(p, scale)}")
        where[p] = v

    segs: list[_Seg] = []
    for e in range(len(g.edges)):
        pts = [conv(p) for p in g.polyline(e)]
        for j in range(len(pts) - 1):
            if pts[j] == pts[j + 1]:
                raise DegenerateDrawingError(
                    f"edge {e} has a zero-length segment at {_fmt_point(pts[j], scale)}")
            segs.append(_Seg(e, j, pts[j], pts[j + 1], j == len(pts) - 2))

    # no curve may pass through a vertex other than its own endpoints
    for s in segs:
        t, h = graph.edges[s.edge]
        for v, w in enumerate(verts):
            if orient(s.p, s.q, w) != 0 or not _on_segment(s.p, s.q, w):
                continue
            if (s.j == 0 and v == t and w == s.p) or (s.last and v == h and w == s.q):
                continue
            raise DegenerateDrawingError(
                f"edge {s.edge} passes through vertex {v} at {_fmt_point(w, scale)}")

    found = []  # (seg index s, seg index t, param on s, param on t, sign, point)
    for i in range(len(segs)):
        s = segs[i]
        sx0, sx1 = sorted((s.p[0], s.q[0]))
        sy0, sy1 = sorted((s.p[1], s.q[1]))
        for k in range(i + 1, len(segs)):
            t = segs[k]
            if max(t.p[0], t.q[0]) < sx0 or min(t.p[0], t.q[0]) > sx1 or \
                    max(t.p[1], t.q[1]) < sy0 or min(t.p[1], t.q[1]) > sy1:
                continue
            hit = _classify_pair(s, t, graph, scale)
            if hit is not None:
                found.append((i, k) + hit)

    by_point = {}
    for rec in found:
        pt = rec[5]
        if pt in by_point:
            a, b = segs[by_point[pt][0]].edge, segs[by_point[pt][1]].edge
            raise DegenerateDrawingError(
                f"edges {a}, {b} and {segs[rec[0]].edge}/{segs[rec[1]].edge} meet at "
                f"the single point ({format_rational(pt[0] / scale)}, "
                f"{format_rational(pt[1] / scale)})")
        by_point[pt] = rec

    slots: list[list[tuple[tuple, int]]] = [[] for _ in g.edges]
    signs = {}
    points = {}
    for cid, (i, k, ts, tt, sgn, pt) in enumerate(found):
        s, t = segs[i], segs[k]
        key_s, key_t = (s.j, ts), (t.j, tt)
        slots[s.edge].append((key_s, cid))
        slots[t.edge].append((key_t, cid))
        s_first = (s.edge, key_s) < (t.edge, key_t)
        signs[cid] = sgn if s_first else -sgn
        points[cid] = (pt[0] / scale, pt[1] / scale)
    routes = [[cid for _, cid in sorted(sl)] for sl in slots]

    rotations = []
    for v in range(graph.n_vertices):
        ends = []
        for e, (t, h) in enumerate(graph.edges):
            pts = g.polyline(e)
            if t == v:
                d = (pts[1][0] - pts[0][0], pts[1][1] - pts[0][1])
                ends.append((d, (e, TAIL)))
            if h == v:
                d = (pts[-2][0] - pts[-1][0], pts[-2][1] - pts[-1][1])
                ends.append((d, (e, HEAD)))
        ends.sort(key=cmp_to_key(lambda x, y: _ccw_cmp(x[0], y[0])))
        rotations.append([end for _, end in ends])

    # number crossings in canonical scan order so ids survive assembly unchanged
    renum = {}
    for r in routes:
        for c in r:
            renum.setdefault(c, len(renum))
    routes = [[renum[c] for c in r] for r in routes]
    signs = {renum[c]: s for c, s in signs.items()}
    points = {renum[c]: p for c, p in points.items()}
    return assemble(graph, rotations, routes, signs), points


def ingest(g: GeoDrawing) -> Drawing:
    return ingest_with_points(g)[0]


def _classify_pair(s: _Seg, t: _Seg, graph: SimpleGraph, scale: int):
    """Return ``(param_s, param_t, sign, point)`` for a proper crossing, None
    for an allowed contact or no contact, raise on degeneracy."""
    o1, o2 = orient(s.p, s.q, t.p), orient(s.p, s.q, t.q)
    o3, o4 = orient(t.p, t.q, s.p), orient(t.p, t.q, s.q)
    where = f"edges {s.edge} and {t.edge}"
    if o1 == 0 and o2 == 0:
        axis = 0 if s.p[0] != s.q[0] else 1
        lo = max(min(s.p[axis], s.q[axis]), min(t.p[axis], t.q[axis]))
        hi = min(max(s.p[axis], s.q[axis]), max(t.p[axis], t.q[axis]))
        if lo < hi:
            raise DegenerateDrawingError(
                f"{where} overlap collinearly near {_fmt_point(s.p, scale)}")
        if lo > hi:
            return None
        contacts = {pt for pt in (s.p, s.q) if pt in (t.p, t.q)}
        _check_contacts(s, t, contacts, graph, scale)
        return None
    if o1 * o2 < 0 and o3 * o4 < 0:
        ds = (s.q[0] - s.p[0], s.q[1] - s.p[1])
        dt = (t.q[0] - t.p[0], t.q[1] - t.p[1])
        den = _cross(ds, dt)
        w = (t.p[0] - s.p[0], t.p[1] - s.p[1])
        ts = Fraction(_cross(w, dt), den)
        tt = Fraction(_cross(w, ds), den)
        pt = (s.p[0] + ts * ds[0], s.p[1] + ts * ds[1])
        return ts, tt, (1 if den > 0 else -1), pt
    contacts = set()
    if o1 == 0 and _on_segment(s.p, s.q, t.p):
        contacts.add(t.p)
    if o2 == 0 and _on_segment(s.p, s.q, t.q):
        contacts.add(t.q)
    if o3 == 0 and _on_segment(t.p, t.q, s.p):
        contacts.add(s.p)
    if o4 == 0 and _on_segment(t.p, t.q, s.q):
        contacts.add(s.q)
    if contacts:
        _check_contacts(s, t, contacts, graph, scale)
    return None


def _check_contacts(s: _Seg, t: _Seg, contacts, graph: SimpleGraph, scale: int) -> None:
    for pt in contacts:
        if s.edge == t.edge and abs(s.j - t.j) == 1:
            shared = s.q if s.j < t.j else s.p
            if pt == shared:
                continue
        if s.edge != t.edge:
            end_s = (s.j == 0 and pt == s.p) or (s.last and pt == s.q)
            end_t = (t.j == 0 and pt == t.p) or (t.last and pt == t.q)
            if end_s and end_t and set(graph.edges[s.edge]) & set(graph.edges[t.edge]):
                continue
        raise DegenerateDrawingError(
            f"edges {s.edge} and {t.edge} touch without crossing at {_fmt_point(pt, scale)}")
