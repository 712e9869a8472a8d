"""String graphs of crossing edges and balanced vertex separators.

The separator side limit is ``floor(2n/3)`` where ``n`` counts the crossing
edges; the reported ratio divides the separator size by the square root of
the number of crossing pairs.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import networkx as nx

from . import kernels
from .drawing import Drawing, ValidationReport, stats

DEFAULT_EXACT_CAP = 14
DEFAULT_RESTARTS = 8


class SeparatorCapError(ValueError):
    """Graph too large for the exhaustive search."""


@dataclass(frozen=True)
class StringGraph:
    vertices: tuple[int, ...]
    adj: dict[int, frozenset[int]]

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return sum(len(nb) for nb in self.adj.values()) // 2

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u in self.vertices for v in self.adj[u] if u < v)

    @classmethod
    def from_edges(cls, vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> "StringGraph":
        vs = tuple(sorted(set(vertices)))
        adj = {v: set() for v in vs}
        for u, v in edges:
            if u == v:
                continue
            adj[u].add(v)
            adj[v].add(u)
        return cls(vs, {v: frozenset(nb) for v, nb in adj.items()})


def string_graph(d: Drawing, active: Iterable[int] | None = None) -> StringGraph:
    """Intersection graph of the crossing edges among ``active``.

    Shared endpoints do not make two edges adjacent; only crossings do.
    """
    st = stats(d, active)
    verts = set(st.self_crossings)
    for a, b in st.pair_multiplicity:
        verts.update((a, b))
    return StringGraph.from_edges(verts, st.pair_multiplicity)


def side_limit(n: int) -> int:
    return (2 * n) // 3


def separator_ratio(f0_size: int, m: int) -> float:
    if m == 0:
        return 0.0 if f0_size == 0 else math.inf
    return f0_size / math.sqrt(m)


@dataclass(frozen=True)
class SeparatorResult:
    f0: tuple[int, ...]
    f1: tuple[int, ...]
    f2: tuple[int, ...]
    ratio: float
    balance: float
    method: str

    def to_dict(self) -> dict:
        ratio = self.ratio if math.isfinite(self.ratio) else "inf"
        return {"f0": list(self.f0), "f1": list(self.f1), "f2": list(self.f2),
                "ratio": ratio, "balance": self.balance, "method": self.method}


def _result(h: StringGraph, f0, f1, f2, method: str) -> SeparatorResult:
    f1, f2 = tuple(sorted(f1)), tuple(sorted(f2))
    balance = max(len(f1), len(f2)) / h.n if h.n else 0.0
    return SeparatorResult(tuple(sorted(f0)), f1, f2,
                           separator_ratio(len(f0), h.m), balance, method)


def _components(h: StringGraph, removed: set[int]) -> list[list[int]]:
    seen = set(removed)
    comps = []
    for s in h.vertices:
        if s in seen:
            continue
        seen.add(s)
        comp, stack = [s], [s]
        while stack:
            u = stack.pop()
            for w in h.adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _split_sizes(sizes: list[int], cap: int) -> list[bool] | None:
    """Choose which items go to side one so both sides stay within ``cap``.

    First-fit by descending size, then an exact subset-sum if that fails.
    """
    total = sum(sizes)
    order = sorted(range(len(sizes)), key=lambda i: -sizes[i])
    side = [False] * len(sizes)
    one = two = 0
    for i in order:
        if one + sizes[i] <= cap:
            side[i] = True
            one += sizes[i]
        elif two + sizes[i] <= cap:
            two += sizes[i]
        else:
            break
    else:
        return side
    reach = {0: None}
    for i, s in enumerate(sizes):
        for acc in sorted(reach, reverse=True):
            if acc + s not in reach:
                reach[acc + s] = (acc, i)
    for target in sorted(reach):
        if target <= cap and total - target <= cap:
            side = [False] * len(sizes)
            while reach[target] is not None:
                prev, i = reach[target]
                side[i] = True
                target = prev
            return side
    return None


def exact_separator(h: StringGraph, cap: int = DEFAULT_EXACT_CAP) -> SeparatorResult:
    """Minimum separator by exhaustive search, smallest candidates first.

    Among separators of minimum size the most even split wins, then the
    lexicographically smallest separator.  The side holding the smallest
    remaining vertex is the lexicographically smallest choice reaching
    that split.
    """
    if h.n > cap:
        raise SeparatorCapError(f"string graph has {h.n} vertices; exact search is capped at {cap}")
    index = {v: i for i, v in enumerate(h.vertices)}
    adj = [0] * h.n
    for v in h.vertices:
        for w in h.adj[v]:
            adj[index[v]] |= 1 << index[w]
    limit = side_limit(h.n)
    mask = kernels.min_separator_mask(adj, limit)
    f0 = {v for v in h.vertices if mask >> index[v] & 1}
    comps = _components(h, f0)
    rest = sum(len(c) for c in comps)
    first, others = comps[:1], comps[1:]
    best = None
    for r in range(len(others) + 1):
        for extra in combinations(others, r):
            size = sum(len(c) for c in first) + sum(len(c) for c in extra)
            if size <= limit and rest - size <= limit:
                cand = (max(size, rest - size),
                        tuple(sorted(v for c in (*first, *extra) for v in c)))
                if best is None or cand < best:
                    best = cand
    f1 = set(best[1]) if comps else set()
    f2 = set(h.vertices) - f0 - f1
    return _result(h, f0, f1, f2, "exact")


def _bfs(h: StringGraph, within: set[int], src: int) -> dict[int, int]:
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for w in sorted(h.adj[u]):
                if w in within and w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def _farthest(dist: dict[int, int]) -> int:
    return min(dist, key=lambda v: (-dist[v], v))


def _candidate_cuts(h: StringGraph, comp: list[int], rng: random.Random) -> list[set[int]]:
    within = set(comp)
    start = comp[rng.randrange(len(comp))]
    far = _farthest(_bfs(h, within, start))
    dist = _bfs(h, within, far)
    other = _farthest(dist)
    cuts = []
    if other not in h.adj[far] and other != far:
        sub = nx.Graph()
        sub.add_nodes_from(comp)
        sub.add_edges_from((u, w) for u in comp for w in h.adj[u] if w in within and u < w)
        cuts.append(set(nx.minimum_node_cut(sub, far, other)))
    depth = max(dist.values())
    for level in range(1, depth):
        cuts.append({v for v, dv in dist.items() if dv == level})
    hub = min(comp, key=lambda v: (-len(h.adj[v] & within), v))
    cuts.append({hub})
    return cuts


def _largest_after(h: StringGraph, comp: list[int], cut: set[int]) -> int:
    sub = StringGraph(tuple(v for v in comp if v not in cut),
                      {v: h.adj[v] & (set(comp) - cut) for v in comp if v not in cut})
    return max((len(c) for c in _components(sub, set())), default=0)


def _packable(h: StringGraph, sep: set[int], limit: int) -> bool:
    return _split_sizes([len(c) for c in _components(h, sep)], limit) is not None


def heuristic_separator(h: StringGraph, restarts: int = DEFAULT_RESTARTS,
                        seed: int = 0) -> SeparatorResult:
    """Balanced separator from repeated vertex cuts and BFS levels.

    Each restart splits the largest component until the pieces pack into two
    sides, then greedily hands separator vertices back while packing still
    succeeds.  The smallest result over all restarts wins.
    """
    limit = side_limit(h.n)
    rng = random.Random(seed)
    best = None
    for _ in range(max(restarts, 1)):
        sep: set[int] = set()
        while not _packable(h, sep, limit):
            comps = _components(h, sep)
            big = max(comps, key=lambda c: (len(c), -c[0]))
            cuts = _candidate_cuts(h, big, rng)
            sep |= min(cuts, key=lambda c: (max(_largest_after(h, big, c) - limit, 0),
                                            len(c), sorted(c)))
        for v in sorted(sep, key=lambda v: (len(h.adj[v]), v)):
            if _packable(h, sep - {v}, limit):
                sep.discard(v)
        key = (len(sep), sorted(sep))
        if best is None or key < best:
            best = key
    f0 = set(best[1])
    comps = _components(h, f0)
    sides = _split_sizes([len(c) for c in comps], limit)
    f1 = {v for c, one in zip(comps, sides) if one for v in c}
    f2 = set(h.vertices) - f0 - f1
    return _result(h, f0, f1, f2, "heuristic")


def find_separator(h: StringGraph, exact_cap: int = DEFAULT_EXACT_CAP,
                   restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> SeparatorResult:
    if h.n <= exact_cap:
        return exact_separator(h, exact_cap)
    return heuristic_separator(h, restarts, seed)


def verify_separator(h: StringGraph, s: SeparatorResult) -> ValidationReport:
    report = ValidationReport()
    parts = [set(s.f0), set(s.f1), set(s.f2)]
    everything = set(h.vertices)
    union = parts[0] | parts[1] | parts[2]
    if sum(len(p) for p in parts) != len(union) or union != everything:
        report.add("partition", f"parts do not partition the {h.n} vertices "
                                f"(missing {sorted(everything - union)}, "
                                f"unknown {sorted(union - everything)})")
    limit = side_limit(h.n)
    for name, part in (("f1", parts[1]), ("f2", parts[2])):
        if len(part) > limit:
            report.add("balance", f"|{name}| = {len(part)} exceeds floor(2n/3) = {limit}")
    for u in parts[1]:
        bad = sorted(h.adj.get(u, frozenset()) & parts[2])
        if bad:
            report.add("cross edge", f"vertex {u} in f1 is adjacent to {bad} in f2")
    expected = separator_ratio(len(parts[0]), h.m)
    if not (s.ratio == expected or (math.isinf(s.ratio) and math.isinf(expected))) \
            and not math.isclose(s.ratio, expected):
        report.add("ratio", f"reported ratio {s.ratio} but |f0|/sqrt(m) = {expected}")
    return report
