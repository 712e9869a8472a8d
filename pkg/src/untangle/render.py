"""SVG pictures of geometric and combinatorial drawings."""
from __future__ import annotations

from typing import Mapping
from xml.sax.saxutils import escape

import networkx as nx
from networkx.algorithms.planar_drawing import combinatorial_embedding_to_pos

from .drawing import TAIL, Drawing, validate_drawing
from .geometry import GeoDrawing, ingest_with_points

STYLE = """
.edge { fill: none; stroke: #444; stroke-width: 1.5; }
.edge.empty { stroke: #999; stroke-dasharray: 4 3; }
.edge.blue { stroke: #1f5fbf; }
.edge.red { stroke: #c8281e; stroke-width: 2; }
.vertex { fill: #000; }
.crossing { fill: none; stroke: #e08a00; stroke-width: 1.2; }
"""


class RenderError(ValueError):
    pass


def _edge_class(e: int, crossed: bool, coloring: Mapping[int, str] | None) -> str:
    if coloring is None:
        return "edge"
    if e in coloring:
        return f"edge {coloring[e]}"
    return "edge" if crossed else "edge empty"


def _svg(paths, vertices, crossings, width, margin, flip_y) -> str:
    xs = [x for pts, _, _ in paths for x, _ in pts] + [x for x, _ in vertices]
    ys = [y for pts, _, _ in paths for _, y in pts] + [y for _, y in vertices]
    if xs:
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    else:
        x0 = x1 = y0 = y1 = 0.0
    span = max(x1 - x0, y1 - y0, 1e-9)
    scale = (width - 2 * margin) / span
    height = round((y1 - y0) * scale + 2 * margin)

    def tr(p):
        x = (p[0] - x0) * scale + margin
        y = (y1 - p[1]) * scale + margin if flip_y else (p[1] - y0) * scale + margin
        return f"{x:.2f} {y:.2f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f"<style>{STYLE}</style>",
    ]
    for pts, cls, eid in paths:
        d = "M " + " L ".join(tr(p) for p in pts)
        out.append(f'<path class="{escape(cls)}" data-edge="{eid}" d="{d}"/>')
    for cid, p in crossings:
        x, y = tr(p).split()
        out.append(f'<circle class="crossing" data-crossing="{cid}" cx="{x}" cy="{y}" r="4"/>')
    for p in vertices:
        x, y = tr(p).split()
        out.append(f'<circle class="vertex" cx="{x}" cy="{y}" r="3"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_geometric(g: GeoDrawing, coloring: Mapping[int, str] | None = None,
                     width: int = 800, margin: int = 20) -> str:
    d, points = ingest_with_points(g)
    paths = []
    for e in range(len(g.edges)):
        pts = [(float(x), float(y)) for x, y in g.polyline(e)]
        paths.append((pts, _edge_class(e, bool(d.routes[e]), coloring), e))
    verts = [(float(x), float(y)) for x, y in g.points]
    marks = [(cid, (float(x), float(y))) for cid, (x, y) in sorted(points.items())]
    return _svg(paths, verts, marks, width, margin, flip_y=True)


def _planar_positions(d: Drawing) -> dict:
    """Straight-line positions for the planarization, each segment subdivided
    twice so the embedding graph is simple."""
    n = d.n_vertices
    ccw: dict = {("v", v): [] for v in range(n)}
    ccw.update({("x", c): [None] * 4 for c in d.crossings})

    def node_at(e, i):  # i-th node along edge e (0 = tail)
        r = d.routes[e]
        if i == 0:
            return ("v", d.graph.edges[e][0])
        if i == len(r) + 1:
            return ("v", d.graph.edges[e][1])
        return ("x", r[i - 1])

    for e in range(d.n_edges):
        for j in range(len(d.routes[e]) + 1):
            s1, s2 = ("s", e, j, 1), ("s", e, j, 2)
            ccw[s1] = [node_at(e, j), s2]
            ccw[s2] = [s1, node_at(e, j + 1)]
    for v in range(n):
        for e, end in d.rotations[v]:
            j = 0 if end == TAIL else len(d.routes[e])
            ccw[("v", v)].append(("s", e, j, 1 if end == TAIL else 2))
    for cid, c in d.crossings.items():
        a_out, a_back = ("s", c.a, c.ai + 1, 1), ("s", c.a, c.ai, 2)
        b_out, b_back = ("s", c.b, c.bi + 1, 1), ("s", c.b, c.bi, 2)
        ccw[("x", cid)] = ([a_out, b_out, a_back, b_back] if c.sign > 0
                           else [a_out, b_back, a_back, b_out])
    emb = nx.PlanarEmbedding()
    emb.set_data({node: list(reversed(nbrs)) for node, nbrs in ccw.items()})
    emb.check_structure()
    pos = combinatorial_embedding_to_pos(emb)
    right = max((x for x, _ in pos.values()), default=0) + 2
    for node in ccw:
        if node not in pos:
            pos[node] = (right, 0)
            right += 2
    return pos


def render_combinatorial(d: Drawing, coloring: Mapping[int, str] | None = None,
                         width: int = 800, margin: int = 20) -> str:
    report = validate_drawing(d)
    if not report.ok:
        raise RenderError(f"cannot render an invalid drawing: {report.violations[0]}")
    try:
        pos = _planar_positions(d)
    except (nx.NetworkXException, KeyError, ValueError) as exc:
        raise RenderError(f"re-embedding failed ({exc}); render the geometric drawing instead") \
            from None
    paths = []
    for e in range(d.n_edges):
        pts = [pos[("v", d.graph.edges[e][0])]]
        for j in range(len(d.routes[e]) + 1):
            pts.append(pos[("s", e, j, 1)])
            pts.append(pos[("s", e, j, 2)])
            if j < len(d.routes[e]):
                pts.append(pos[("x", d.routes[e][j])])
        pts.append(pos[("v", d.graph.edges[e][1])])
        paths.append(([(float(x), float(y)) for x, y in pts],
                      _edge_class(e, bool(d.routes[e]), coloring), e))
    verts = [tuple(map(float, pos[("v", v)])) for v in range(d.n_vertices)]
    marks = [(cid, tuple(map(float, pos[("x", cid)]))) for cid in sorted(d.crossings)]
    return _svg(paths, verts, marks, width, margin, flip_y=True)


def render_svg(d: GeoDrawing | Drawing, coloring: Mapping[int, str] | None = None,
               width: int = 800, margin: int = 20) -> str:
    if isinstance(d, GeoDrawing):
        return render_geometric(d, coloring, width, margin)
    return render_combinatorial(d, coloring, width, margin)


__all__ = ["render_svg", "render_geometric", "render_combinatorial", "RenderError"]
