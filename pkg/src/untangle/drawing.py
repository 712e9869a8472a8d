"""Combinatorial drawings: graph, per-edge crossing routes, rotation system.

A drawing is stored as its planarization.  Every crossing is a degree-4 node
whose rotation follows from its sign, every graph vertex carries an explicit
ccw rotation of edge-ends, and every edge is the ordered list of crossings it
meets from tail to head.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from . import kernels

TAIL, HEAD = 0, 1
END_NAMES = ("tail", "head")


class DrawingFormatError(ValueError):
    """A drawing file could not be parsed into the expected shape."""


@dataclass(frozen=True)
class SimpleGraph:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def incident_ends(self, v: int) -> list[tuple[int, int]]:
        ends = []
        for e, (t, h) in enumerate(self.edges):
            if t == v:
                ends.append((e, TAIL))
            if h == v:
                ends.append((e, HEAD))
        return ends


class Crossing(NamedTuple):
    """Crossing of strand ``a`` (slot ``ai``) with strand ``b`` (slot ``bi``).

    ``sign`` is +1 when, walking ``a`` from tail to head, ``b`` passes from
    the right side to the left side.
    """
    id: int
    a: int
    ai: int
    b: int
    bi: int
    sign: int

    def other(self, edge: int) -> int:
        return self.b if self.a == edge else self.a

    def sign_along(self, edge: int) -> int:
        """Sign seen from ``edge`` (which must not self-cross here)."""
        return self.sign if self.a == edge else -self.sign


@dataclass
class Drawing:
    graph: SimpleGraph
    routes: list[list[int]]
    crossings: dict[int, Crossing]
    rotations: list[list[tuple[int, int]]]

    @property
    def n_vertices(self) -> int:
        return self.graph.n_vertices

    @property
    def n_edges(self) -> int:
        return self.graph.n_edges

    def copy(self) -> "Drawing":
        return Drawing(self.graph, [list(r) for r in self.routes],
                       dict(self.crossings), [list(r) for r in self.rotations])

    def signs(self) -> dict[int, int]:
        return {c.id: c.sign for c in self.crossings.values()}

    def multiplicity(self, e: int, f: int) -> int:
        """Number of crossings between ``e`` and ``f`` (self-crossings if equal)."""
        return sum(1 for c in self.crossings.values() if {c.a, c.b} == {e, f})


def assemble(graph: SimpleGraph, rotations: list[list[tuple[int, int]]],
             routes: list[list[int]], signs: dict[int, int]) -> Drawing:
    """Build the canonical drawing from raw routes.

    ``signs[c]`` is relative to the strand met first when scanning edges in
    id order and each route from tail to head.  Crossing ids are renumbered
    in that scan order, so equal drawings serialize identically.
    """
    renum: dict[int, int] = {}
    first: dict[int, tuple[int, int]] = {}
    crossings: dict[int, Crossing] = {}
    new_routes = []
    for e, route in enumerate(routes):
        out = []
        for i, c in enumerate(route):
            if c not in renum:
                renum[c] = len(renum)
                first[c] = (e, i)
            else:
                a, ai = first[c]
                cid = renum[c]
                crossings[cid] = Crossing(cid, a, ai, e, i, signs[c])
            out.append(renum[c])
        new_routes.append(out)
    if len(crossings) != len(renum):
        raise ValueError("every crossing must occur in exactly two route slots")
    return Drawing(graph, new_routes, dict(sorted(crossings.items())),
                   [canonical_rotation(r) for r in rotations])


def canonical_rotation(rot: list[tuple[int, int]]) -> list[tuple[int, int]]:
    if not rot:
        return []
    i = rot.index(min(rot))
    return list(rot[i:]) + list(rot[:i])


# -- validation ------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def add(self, kind: str, detail: str) -> None:
        self.violations.append(Violation(kind, detail))

    def to_dict(self) -> dict:
        return {"ok": self.ok,
                "violations": [{"kind": v.kind, "detail": v.detail} for v in self.violations]}


def _structural(d: Drawing, report: ValidationReport) -> None:
    g = d.graph
    seen_pairs: dict[frozenset, int] = {}
    for e, (t, h) in enumerate(g.edges):
        if not (0 <= t < g.n_vertices and 0 <= h < g.n_vertices):
            report.add("bad endpoint", f"edge {e} has endpoint outside 0..{g.n_vertices - 1}")
            continue
        if t == h:
            report.add("loop", f"edge {e} starts and ends at vertex {t}")
        key = frozenset((t, h))
        if key in seen_pairs:
            report.add("parallel edge", f"edges {seen_pairs[key]} and {e} join {t} and {h}")
        else:
            seen_pairs[key] = e
    if len(d.routes) != g.n_edges:
        report.add("route count", f"{len(d.routes)} routes for {g.n_edges} edges")
        return

    occurrences: Counter = Counter(c for r in d.routes for c in r)
    for c, k in sorted(occurrences.items()):
        if c not in d.crossings:
            report.add("unknown crossing", f"crossing {c} appears in a route but has no record")
        elif k == 1:
            report.add("dangling crossing", f"crossing {c} occupies only one route slot")
        elif k > 2:
            report.add("duplicated slot", f"crossing {c} occupies {k} route slots")
    for cid, c in d.crossings.items():
        if cid not in occurrences:
            report.add("orphan crossing", f"crossing {cid} is in no route")
        if c.id != cid:
            report.add("slot mismatch", f"crossing record keyed {cid} carries id {c.id}")
        if c.sign not in (1, -1):
            report.add("bad sign", f"crossing {cid} has sign {c.sign}")
        if c.a == c.b and c.ai == c.bi:
            report.add("degenerate self-crossing", f"crossing {cid} uses slot {c.ai} twice")
        for edge, idx in ((c.a, c.ai), (c.b, c.bi)):
            if not (0 <= edge < g.n_edges and 0 <= idx < len(d.routes[edge])
                    and d.routes[edge][idx] == cid):
                report.add("slot mismatch",
                           f"crossing {cid} claims slot {idx} of edge {edge}")

    if len(d.rotations) != g.n_vertices:
        report.add("bad rotation", f"{len(d.rotations)} rotations for {g.n_vertices} vertices")
        return
    for v in range(g.n_vertices):
        expected = Counter(g.incident_ends(v))
        got = Counter((e, end) for e, end in d.rotations[v])
        if expected != got:
            missing = sorted((expected - got).elements())
            extra = sorted((got - expected).elements())
            report.add("bad rotation",
                       f"vertex {v}: missing {missing}, unexpected {extra}")


def _kernel_arrays(d: Drawing):
    offsets = [0]
    flat: list[int] = []
    for r in d.routes:
        flat.extend(r)
        offsets.append(len(flat))
    index = {cid: i for i, cid in enumerate(sorted(d.crossings))}
    xa = [0] * len(index)
    xb = [0] * len(index)
    xs = [0] * len(index)
    for cid, c in d.crossings.items():
        i = index[cid]
        xa[i] = offsets[c.a] + c.ai
        xb[i] = offsets[c.b] + c.bi
        xs[i] = c.sign
    rot_offsets = [0]
    rot_ends: list[int] = []
    for rot in d.rotations:
        rot_ends.extend(2 * e + end for e, end in rot)
        rot_offsets.append(len(rot_ends))
    return (d.n_vertices, offsets, flat, xa, xb, xs, rot_offsets, rot_ends), index


def euler_characteristic(d: Drawing) -> tuple[int, int, int, int]:
    """Return ``(V, E, F, C)`` of the planarization (structure must be sound).

    ``F`` merges the outer faces of all components into one, so a plane
    drawing satisfies ``V - E + F == 1 + C``.
    """
    args, _ = _kernel_arrays(d)
    traced, comps, isolated = kernels.euler_counts(*args)
    v = d.n_vertices + len(d.crossings)
    e = sum(len(r) + 1 for r in d.routes)
    faces = traced - comps + 1
    return v, e, faces, comps + isolated


def validate_drawing(d: Drawing) -> ValidationReport:
    report = ValidationReport()
    _structural(d, report)
    if report.ok:
        v, e, f, c = euler_characteristic(d)
        if v - e + f != 1 + c:
            report.add("euler", f"V - E + F = {v} - {e} + {f} = {v - e + f}, "
                                f"expected 1 + C = {1 + c}")
    return report


Dart = tuple[int, int, int]  # (edge, segment index, +1 towards head / -1 towards tail)


def trace_faces(d: Drawing) -> list[list[Dart]]:
    """Faces of the planarization as cyclic dart sequences.

    Each connected component contributes its own outer face.
    """
    report = ValidationReport()
    _structural(d, report)
    if not report.ok:
        raise ValueError(f"inconsistent drawing structure: {report.violations[0]}")
    args, _ = _kernel_arrays(d)
    succ, _origin = kernels.dart_successors(*args)
    offsets = args[1]
    seg_edge = []
    for e in range(d.n_edges):
        seg_edge.extend((e, j) for j in range(offsets[e + 1] - offsets[e] + 1))
    seen = bytearray(len(succ))
    faces = []
    for start in range(len(succ)):
        if seen[start]:
            continue
        face = []
        x = start
        while not seen[x]:
            seen[x] = 1
            e, j = seg_edge[x >> 1]
            face.append((e, j, -1 if x & 1 else 1))
            x = succ[x ^ 1]
        faces.append(face)
    return faces


# -- counting --------------------------------------------------------------

@dataclass
class DrawingStats:
    crossing_points: int
    k: int
    l: int
    pair_multiplicity: dict[tuple[int, int], int]
    self_crossings: dict[int, int]

    @property
    def max_multiplicity(self) -> int:
        return max(self.pair_multiplicity.values(), default=0)

    @property
    def is_simple(self) -> bool:
        return self.max_multiplicity <= 1 and not self.self_crossings

    def to_dict(self) -> dict:
        return {
            "crossing_points": self.crossing_points,
            "k": self.k,
            "l": self.l,
            "max_multiplicity": self.max_multiplicity,
            "self_crossings": sum(self.self_crossings.values()),
            "simple": self.is_simple,
            "pairs": [[a, b, m] for (a, b), m in sorted(self.pair_multiplicity.items())],
        }


def _active_set(d: Drawing, active: Iterable[int] | None) -> set[int]:
    if active is None:
        return set(range(d.n_edges))
    act = set(active)
    bad = [e for e in act if not (isinstance(e, int) and 0 <= e < d.n_edges)]
    if bad:
        raise ValueError(f"unknown edge id(s) in active set: {sorted(bad, key=str)}")
    return act


def stats(d: Drawing, active: Iterable[int] | None = None) -> DrawingStats:
    act = _active_set(d, active)
    pairs: Counter = Counter()
    selfs: Counter = Counter()
    points = 0
    for c in d.crossings.values():
        if c.a in act and c.b in act:
            points += 1
            if c.a == c.b:
                selfs[c.a] += 1
            else:
                pairs[(min(c.a, c.b), max(c.a, c.b))] += 1
    crossing_edges = set(selfs)
    for a, b in pairs:
        crossing_edges.update((a, b))
    return DrawingStats(points, len(pairs), len(crossing_edges), dict(pairs), dict(selfs))


def classify_edges(d: Drawing, active: Iterable[int] | None = None) -> tuple[set[int], set[int]]:
    """Split ``active`` into (empty edges, crossing edges)."""
    act = _active_set(d, active)
    crossing = set()
    for c in d.crossings.values():
        if c.a in act and c.b in act:
            crossing.add(c.a)
            crossing.add(c.b)
    return act - crossing, crossing


# -- .cdraw files ----------------------------------------------------------

def to_json(d: Drawing) -> dict:
    return {
        "vertices": [
            {"id": v, "rotation": [{"edge": e, "end": END_NAMES[end]} for e, end in rot]}
            for v, rot in enumerate(d.rotations)
        ],
        "edges": [
            {"id": e, "tail": t, "head": h, "route": list(d.routes[e])}
            for e, (t, h) in enumerate(d.graph.edges)
        ],
        "crossings": [
            {"id": c.id, "a": c.a, "ai": c.ai, "b": c.b, "bi": c.bi, "sign": c.sign}
            for _, c in sorted(d.crossings.items())
        ],
    }


def dumps(d: Drawing) -> str:
    return json.dumps(to_json(d), indent=1, sort_keys=True) + "\n"


def _dense(items: list, what: str) -> dict:
    try:
        ids = [item["id"] for item in items]
    except (KeyError, TypeError):
        raise DrawingFormatError(f"every {what} needs an integer 'id'") from None
    if len(set(ids)) != len(ids):
        raise DrawingFormatError(f"duplicate {what} ids")
    return {old: new for new, old in enumerate(sorted(ids))}


def from_json(obj: dict) -> Drawing:
    """Parse a .cdraw object.  Ids are remapped densely in ascending order.

    Only the shape is checked here; consistency problems are left for
    :func:`validate_drawing` to report.
    """
    try:
        verts, edges, crossings = obj["vertices"], obj["edges"], obj["crossings"]
    except (KeyError, TypeError):
        raise DrawingFormatError("expected keys 'vertices', 'edges', 'crossings'") from None
    vmap = _dense(verts, "vertex")
    emap = _dense(edges, "edge")
    cmap = _dense(crossings, "crossing")
    spare = len(cmap)

    def cref(c):
        nonlocal spare
        if c not in cmap:
            cmap[c] = spare
            spare += 1
        return cmap[c]

    try:
        edge_list = [None] * len(edges)
        routes: list[list[int]] = [[] for _ in edges]
        for item in edges:
            e = emap[item["id"]]
            edge_list[e] = (vmap.get(item["tail"], -1), vmap.get(item["head"], -1))
            routes[e] = [cref(c) for c in item["route"]]
        rotations: list[list[tuple[int, int]]] = [[] for _ in verts]
        for item in verts:
            rotations[vmap[item["id"]]] = [
                (emap.get(r["edge"], -1), END_NAMES.index(r["end"])) for r in item["rotation"]]
        table = {}
        for item in crossings:
            cid = cmap[item["id"]]
            table[cid] = Crossing(cid, emap.get(item["a"], -1), int(item["ai"]),
                                  emap.get(item["b"], -1), int(item["bi"]), int(item["sign"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DrawingFormatError(f"malformed drawing record: {exc!r}") from None
    graph = SimpleGraph(len(verts), tuple(edge_list))
    return Drawing(graph, routes, table, rotations)


def loads(text: str) -> Drawing:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DrawingFormatError(f"not JSON: {exc}") from None
    return from_json(obj)


def read(path) -> Drawing:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write(d: Drawing, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(d))
