"""Separator recursion that redraws a drawing into a simple one.

The crossing edges are split by a balanced separator of their intersection
graph; both sides are untangled recursively on the shared drawing, then the
separator edges (red) and the rest (blue) are normalized together.  Every
level is recorded so the crossing bound can be re-checked numerically with
the separator ratio actually achieved.
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable

from .drawing import Drawing, classify_edges, stats, validate_drawing
from .separator import (DEFAULT_EXACT_CAP, DEFAULT_RESTARTS, find_separator,
                        side_limit, string_graph)
from .transforms import BLUE, RED, InvariantError, StepLog, normalize, potential

log = logging.getLogger(__name__)

DEBUG_LEVELS = ("off", "level", "step")
_EPS = 1e-9


def theorem_bound(k: int, l: int, c: float) -> tuple[float, float]:
    """Return ``(4 c k^1.5 log2 l, 8 c k^1.5 log2 k)``."""
    if k < 1 or l < 2 or c < 0:
        raise ValueError(f"need k >= 1, l >= 2, c >= 0 (got k={k}, l={l}, c={c})")
    lemma = 4 * c * k ** 1.5 * math.log2(l)
    theorem = 8 * c * k ** 1.5 * math.log2(k)
    if l <= 2 * k and k >= 2:
        # log2 l <= 2 log2 k here; equality only at k = 2, l = 4
        assert lemma <= theorem * (1 + _EPS), (k, l, c)
    return lemma, theorem


def _term(k: int, l: int) -> float:
    return k ** 1.5 * math.log2(l) if k > 0 else 0.0


@dataclass
class LevelRecord:
    depth: int
    l: int
    k: int
    l0: int = 0
    l1: int = 0
    l2: int = 0
    k1: int = 0
    k2: int = 0
    ratio: float = 0.0
    balance: float = 0.0
    method: str = "base"
    steps: int = 0
    bb: int = 0
    br_rr: int = 0
    f12_before: int = 0
    f12_after: int = 0
    total_after: int = 0
    max_multiplicity_after: int = 0

    @property
    def is_base(self) -> bool:
        return self.method == "base"

    def structural_violations(self) -> list[str]:
        """Checks that do not depend on the measured constant."""
        bad = []
        if self.max_multiplicity_after > 1:
            bad.append("an active pair still crosses more than once")
        if self.is_base:
            if self.total_after != 0:
                bad.append("base level left crossings behind")
            return bad
        limit = side_limit(self.l)
        if self.l0 + self.l1 + self.l2 != self.l:
            bad.append("l0 + l1 + l2 != l")
        if self.k1 + self.k2 > self.k:
            bad.append("k1 + k2 > k")
        if self.l1 > limit or self.l2 > limit:
            bad.append("side larger than floor(2l/3)")
        if self.f12_before or self.f12_after:
            bad.append("F1 and F2 edges cross")
        if self.br_rr > self.l0 * self.l:
            bad.append("BR + RR > l0 * l")
        if self.k1 ** 1.5 + self.k2 ** 1.5 > self.k ** 1.5 * (1 + _EPS):
            bad.append("k1^1.5 + k2^1.5 > k^1.5")
        return bad

    def bound_violations(self, c: float) -> list[str]:
        if self.k == 0:
            return []
        bad = []
        if self.bb > 4 * c * (_term(self.k1, self.l1) + _term(self.k2, self.l2)) + _EPS:
            bad.append("BB exceeds the bound inherited from both sides")
        if self.total_after > 4 * c * _term(self.k, self.l) + _EPS:
            bad.append("level crossings exceed 4 c k^1.5 log2 l")
        return bad


@dataclass
class UntangleReport:
    k: int
    l: int
    crossings_in: int
    levels: list[LevelRecord] = field(default_factory=list)
    c_hat: float = 0.0
    final_crossings: int = 0
    final_max_multiplicity: int = 0
    final_self_crossings: int = 0
    bound_lemma: float | None = None
    bound_theorem: float | None = None
    simple: bool = False
    empty_edges_unchanged: bool = False
    level_invariants_ok: bool = False
    lemma_bound_ok: bool = False
    theorem_bound_ok: bool | None = None
    target_c: float | None = None
    target_met: bool | None = None
    steps: int = 0
    problems: list[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return (self.simple and self.empty_edges_unchanged and self.level_invariants_ok
                and self.lemma_bound_ok and self.theorem_bound_ok is not False)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["certified"] = self.certified
        return out


class _Run:
    def __init__(self, d: Drawing, exact_cap: int, restarts: int, seed: int,
                 debug: str, log_to: StepLog | None):
        if debug not in DEBUG_LEVELS:
            raise ValueError(f"debug must be one of {DEBUG_LEVELS}")
        self.d = d
        self.exact_cap = exact_cap
        self.restarts = restarts
        self.seed = seed
        self.debug = debug
        self.log_to = log_to
        self.levels: list[LevelRecord] = []
        self.guards: list[tuple[set[int], set[int]]] = []
        self.steps = 0

    def _between(self, d: Drawing, one: set[int], two: set[int]) -> int:
        return sum(1 for c in d.crossings.values()
                   if (c.a in one and c.b in two) or (c.a in two and c.b in one))

    def _check_step(self, d: Drawing) -> None:
        report = validate_drawing(d)
        if not report.ok:
            raise InvariantError(f"surgery produced an invalid drawing: {report.violations[0]}")
        for one, two in self.guards:
            if self._between(d, one, two):
                raise InvariantError("F1 and F2 edges cross during recursion")

    def _normalize(self, col, active) -> int:
        check = self._check_step if self.debug == "step" else None
        self.d, steps = normalize(self.d, col, active, log_to=self.log_to, check=check)
        self.steps += steps
        return steps

    def rec(self, active: set[int], depth: int) -> None:
        empty, crossing = classify_edges(self.d, active)
        st = stats(self.d, active)
        if st.l == 0:
            return
        rec = LevelRecord(depth=depth, l=st.l, k=st.k)
        self.levels.append(rec)
        if st.k == 0:
            # only self-crossings: cutting the loops finishes the level
            rec.steps = self._normalize({e: BLUE for e in crossing}, active)
        else:
            h = string_graph(self.d, active)
            sep = find_separator(h, self.exact_cap, self.restarts,
                                 seed=self.seed * 1_000_003 + len(self.levels))
            f0, f1, f2 = set(sep.f0), set(sep.f1), set(sep.f2)
            rec.l0, rec.l1, rec.l2 = len(f0), len(f1), len(f2)
            rec.ratio, rec.balance, rec.method = sep.ratio, sep.balance, sep.method
            rec.k1 = stats(self.d, empty | f1).k
            rec.k2 = stats(self.d, empty | f2).k
            rec.f12_before = self._between(self.d, f1, f2)
            self.guards.append((f1, f2))
            self.rec(empty | f1, depth + 1)
            self.rec(empty | f2, depth + 1)
            self.guards.pop()
            rec.f12_after = self._between(self.d, f1, f2)
            col = {e: BLUE for e in f1 | f2}
            col.update({e: RED for e in f0})
            rec.steps = self._normalize(col, active)
            pot = potential(self.d, col)
            rec.bb, rec.br_rr = pot.bb, pot.br + pot.rr
        after = stats(self.d, active)
        rec.total_after = after.crossing_points
        rec.max_multiplicity_after = after.max_multiplicity
        if self.debug in ("level", "step"):
            report = validate_drawing(self.d)
            if not report.ok:
                raise InvariantError(f"level {depth} left an invalid drawing: {report.violations[0]}")
        log.debug("level depth=%d l=%d k=%d sep=(%d,%d,%d) steps=%d",
                  depth, rec.l, rec.k, rec.l0, rec.l1, rec.l2, rec.steps)


def untangle_rec(d: Drawing, active: Iterable[int], *, exact_cap: int = DEFAULT_EXACT_CAP,
                 restarts: int = DEFAULT_RESTARTS, seed: int = 0, debug: str = "off",
                 log_to: StepLog | None = None) -> tuple[Drawing, list[LevelRecord]]:
    run = _Run(d, exact_cap, restarts, seed, debug, log_to)
    run.rec(set(active), 0)
    return run.d, run.levels


def untangle(d: Drawing, *, exact_cap: int = DEFAULT_EXACT_CAP,
             restarts: int = DEFAULT_RESTARTS, seed: int = 0, debug: str = "off",
             log_to: StepLog | None = None,
             target_c: float | None = None) -> tuple[Drawing, UntangleReport]:
    """Redraw ``d`` so every pair of edges crosses at most once.

    Edges that cross nothing keep their (empty) routes; the report carries
    the per-level accounting and the bound checks evaluated with the largest
    separator ratio met on the way.
    """
    check = validate_drawing(d)
    if not check.ok:
        raise ValueError(f"input drawing is invalid: {check.violations[0]}")
    empty, crossing = classify_edges(d)
    st = stats(d)
    report = UntangleReport(k=st.k, l=st.l, crossings_in=st.crossing_points, target_c=target_c)
    run = _Run(d, exact_cap, restarts, seed, debug, log_to)
    run.rec(set(crossing), 0)
    out = run.d

    final = stats(out)
    report.levels = run.levels
    report.steps = run.steps
    report.final_crossings = final.crossing_points
    report.final_max_multiplicity = final.max_multiplicity
    report.final_self_crossings = sum(final.self_crossings.values())
    report.simple = final.is_simple
    report.empty_edges_unchanged = all(not out.routes[e] for e in empty)
    finite = [r.ratio for r in run.levels if not r.is_base]
    report.c_hat = max(finite, default=0.0)

    problems = []
    for r in run.levels:
        problems += [f"depth {r.depth}: {msg}" for msg in r.structural_violations()]
    report.level_invariants_ok = not problems
    bound_problems = [f"depth {r.depth}: {msg}"
                      for r in run.levels for msg in r.bound_violations(report.c_hat)]
    if report.k >= 1:
        report.bound_lemma, report.bound_theorem = theorem_bound(report.k, max(report.l, 2),
                                                                 report.c_hat)
        report.lemma_bound_ok = (report.final_crossings <= report.bound_lemma + _EPS
                                 and not bound_problems)
        if report.k >= 2:
            report.theorem_bound_ok = report.final_crossings < report.bound_theorem
    else:
        report.lemma_bound_ok = report.final_crossings == 0
    if target_c is not None:
        report.target_met = report.c_hat <= target_c
    report.problems = problems + bound_problems
    return out, report
