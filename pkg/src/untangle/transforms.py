"""Crossing surgery: rerouting double crossings and cutting self-loops.

Both transformations work on the combinatorial drawing only.  A rerouted
piece is replaced by a parallel copy of the other piece, so it inherits one
crossing for every crossing on that piece; which side of the template the
copy runs on is decided from the stored crossing signs.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple

from .drawing import Drawing, assemble

log = logging.getLogger(__name__)

BLUE, RED = "blue", "red"
Coloring = Mapping[int, str]


class InvariantError(AssertionError):
    """A runtime-checked invariant of the surgery failed."""


class Potential(NamedTuple):
    bb: int
    br: int
    rr: int


@dataclass(frozen=True)
class Piece:
    """Route slots ``start <= i < stop`` of ``edge``."""
    edge: int
    start: int
    stop: int

    def ids(self, d: Drawing) -> list[int]:
        return d.routes[self.edge][self.start:self.stop]


def potential(d: Drawing, col: Coloring) -> Potential:
    bb = br = rr = 0
    for c in d.crossings.values():
        ca, cb = col.get(c.a), col.get(c.b)
        if ca is None or cb is None:
            continue
        if ca == cb == BLUE:
            bb += 1
        elif ca == cb == RED:
            rr += 1
        else:
            br += 1
    return Potential(bb, br, rr)


def piece_cost(d: Drawing, p: Piece, col: Coloring) -> tuple[int, int, int]:
    """(blue, red, uncolored) counts of the other strands met inside ``p``."""
    route = d.routes[p.edge]
    if not (0 <= p.start <= p.stop <= len(route)):
        raise ValueError(f"piece [{p.start}, {p.stop}) outside route of edge {p.edge}")
    blue = red = other = 0
    for cid in route[p.start:p.stop]:
        colour = col.get(d.crossings[cid].other(p.edge))
        if colour == BLUE:
            blue += 1
        elif colour == RED:
            red += 1
        else:
            other += 1
    return blue, red, other


def _self_crossing_edges(d: Drawing) -> set[int]:
    return {c.a for c in d.crossings.values() if c.a == c.b}


def reduce_crossings(d: Drawing, e: int, f: int, col: Coloring) -> Drawing:
    """Remove the first pair of e-f crossings that is consecutive along ``e``
    by redrawing the costlier of the two pieces between them along the other.
    """
    if e == f:
        raise ValueError("reduce_crossings needs two distinct edges")
    if e > f:
        e, f = f, e
    shared = [cid for cid in d.routes[e] if d.crossings[cid].other(e) == f]
    if len(shared) < 2:
        raise ValueError(f"edges {e} and {f} cross {len(shared)} time(s); need at least 2")
    if {e, f} & _self_crossing_edges(d):
        raise ValueError(f"edges {e} and {f} must be free of self-crossings")
    x, y = shared[0], shared[1]
    re, rf = d.routes[e], d.routes[f]
    ex, ey = re.index(x), re.index(y)
    fx, fy = rf.index(x), rf.index(y)
    e_piece = Piece(e, ex + 1, ey)
    f_piece = Piece(f, min(fx, fy) + 1, max(fx, fy))
    be, rde, ue = piece_cost(d, e_piece, col)
    bf, rdf, uf = piece_cost(d, f_piece, col)
    if (be, rde, ue) <= (bf, rdf, uf):
        return _redraw_along(d, moved=f, template=e, x=x, y=y)
    return _redraw_along(d, moved=e, template=f, x=x, y=y)


def _redraw_along(d: Drawing, moved: int, template: int, x: int, y: int) -> Drawing:
    rm, rt = d.routes[moved], d.routes[template]
    p, q = (x, y) if rm.index(x) < rm.index(y) else (y, x)
    mp, mq = rm.index(p), rm.index(q)
    tp, tq = rt.index(p), rt.index(q)
    step = 1 if tp < tq else -1
    inner = rt[tp + 1:tq] if step == 1 else rt[tq + 1:tp][::-1]

    # signs seen while walking the template from p to q
    s_p = d.crossings[p].sign_along(template) * step
    s_q = d.crossings[q].sign_along(template) * step

    deleted = {p, q, *rm[mp + 1:mq]}
    signs = d.signs()
    next_id = max(d.crossings, default=-1) + 1
    copy = []
    before: dict[tuple[int, int], int] = {}
    after: dict[tuple[int, int], int] = {}
    rel = {}  # new id -> (other strand, crossing copied, sign seen from the copy)
    for z in inner:
        cz = d.crossings[z]
        if cz.a == cz.b:
            raise InvariantError(f"template piece of edge {template} crosses itself")
        g = cz.other(template)
        s_z = cz.sign_along(template) * step
        nz = next_id
        next_id += 1
        copy.append(nz)
        (before if s_z == s_p else after)[(g, z)] = nz
        rel[nz] = (g, z, s_z)

    tail_piece = []
    if s_q == s_p:
        # the copy must cross back over the template just before q
        closing = next_id
        signs[closing] = d.crossings[q].sign_along(template)
        if moved < template:
            signs[closing] = -signs[closing]
        tail_piece = [closing]

    routes = []
    for edge, route in enumerate(d.routes):
        if edge == moved:
            route = route[:mp] + copy + tail_piece + route[mq + 1:]
        elif edge == template:
            route = [c2 for c in route for c2 in (tail_piece if c == q else [c])]
        out = []
        for c in route:
            if c in deleted:
                continue
            key = (edge, c)
            if key in before:
                out.append(before[key])
            out.append(c)
            if key in after:
                out.append(after[key])
        routes.append(out)

    for nz, (g, z, s_z) in rel.items():
        if g != moved:
            signs[nz] = s_z if moved < g else -s_z
        else:
            # new self-crossing: orient it from whichever occurrence comes first
            old_first = rm.index(z) < mp
            signs[nz] = -s_z if old_first else s_z
    for c in deleted:
        del signs[c]
    return assemble(d.graph, d.rotations, routes, signs)


def remove_self_crossings(d: Drawing, e: int) -> Drawing:
    """Cut the loop of ``e`` between the two visits of its first self-crossing."""
    route = d.routes[e]
    for i, cid in enumerate(route):
        c = d.crossings[cid]
        if c.a == c.b:
            j = c.bi if c.ai == i else c.ai
            break
    else:
        raise ValueError(f"edge {e} has no self-crossing")
    deleted = set(route[i:j + 1])
    routes = [[c for c in r if c not in deleted] for r in d.routes]
    signs = {cid: s for cid, s in d.signs().items() if cid not in deleted}
    return assemble(d.graph, d.rotations, routes, signs)


@dataclass
class Step:
    step: int
    kind: str
    edges: list[int]
    potential_before: Potential
    potential_after: Potential
    crossings_total: int

    def to_dict(self) -> dict:
        return {"step": self.step, "kind": self.kind, "edges": self.edges,
                "potential_before": list(self.potential_before),
                "potential_after": list(self.potential_after),
                "crossings_total": self.crossings_total}


class StepLog:
    """Collects transformation steps; optionally streams them as JSON lines."""

    def __init__(self, stream=None, keep: bool = True):
        self.stream = stream
        self.keep = keep
        self.steps: list[Step] = []
        self.count = 0

    def record(self, kind, edges, before, after, total) -> Step:
        self.count += 1
        step = Step(self.count, kind, list(edges), before, after, total)
        if self.keep:
            self.steps.append(step)
        if self.stream is not None:
            self.stream.write(json.dumps(step.to_dict(), sort_keys=True) + "\n")
        return step


def _next_move(d: Drawing, active: set[int]):
    selfs = sorted({c.a for c in d.crossings.values() if c.a == c.b and c.a in active})
    if selfs:
        return "remove_self_crossings", (selfs[0],)
    seen = set()
    best = None
    for c in d.crossings.values():
        if c.a != c.b and c.a in active and c.b in active:
            pair = (min(c.a, c.b), max(c.a, c.b))
            if pair in seen and (best is None or pair < best):
                best = pair
            seen.add(pair)
    if best is not None:
        return "reduce_crossings", best
    return None


def normalize(d: Drawing, col: Coloring, active: Iterable[int],
              log_to: StepLog | None = None,
              check: Callable[[Drawing], None] | None = None) -> tuple[Drawing, int]:
    """Apply both transformations until active edges pairwise cross at most
    once and none crosses itself.  Returns the drawing and the step count.

    Every step must strictly decrease (BB, BR, RR) lexicographically;
    ``check`` is called on each intermediate drawing.
    """
    act = set(active)
    for c in d.crossings.values():
        if c.a in act and c.b in act:
            for edge in (c.a, c.b):
                if edge not in col:
                    raise ValueError(f"active crossing edge {edge} is uncolored")
    steps = 0
    pot = potential(d, col)
    while True:
        move = _next_move(d, act)
        if move is None:
            return d, steps
        kind, edges = move
        if kind == "remove_self_crossings":
            d = remove_self_crossings(d, edges[0])
        else:
            d = reduce_crossings(d, edges[0], edges[1], col)
        new_pot = potential(d, col)
        if not new_pot < pot:
            raise InvariantError(f"{kind}{edges} did not decrease the potential: "
                                 f"{tuple(pot)} -> {tuple(new_pot)}")
        steps += 1
        if log_to is not None:
            log_to.record(kind, edges, pot, new_pot, len(d.crossings))
        if check is not None:
            check(d)
        pot = new_pot
