"""The seeded detour corpus used by the acceptance suite and ``gen --corpus``."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator, NamedTuple

from .generate import gen_random
from .geometry import GeoDrawing

SPECS: tuple[tuple[str, tuple], ...] = (
    ("complete", (5,)), ("complete", (6,)), ("complete", (7,)), ("complete", (8,)),
    ("bipartite", (3, 3)), ("bipartite", (3, 4)), ("bipartite", (4, 4)),
    *(("random", (n, Fraction(1, 2))) for n in range(6, 13)),
)
SEEDS_PER_SPEC = 16
DETOUR = 2


class CorpusItem(NamedTuple):
    family: str
    params: tuple
    seed: int
    drawing: GeoDrawing

    @property
    def name(self) -> str:
        args = "_".join(str(p).replace("/", "over") for p in self.params)
        return f"{self.family}_{args}_s{self.seed}"


def corpus(seeds_per_spec: int = SEEDS_PER_SPEC, detour: int = DETOUR,
           specs=SPECS) -> Iterator[CorpusItem]:
    for family, params in specs:
        for seed in range(seeds_per_spec):
            yield CorpusItem(family, params, seed,
                             gen_random(family, params, detour=detour, seed=seed))
