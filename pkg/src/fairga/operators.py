"""Seeding, selection, crossover, mutation and lifetime-aware discarding.

Every stochastic operator takes its :class:`~fairga.core.RandomSource`
explicitly; nothing here touches global random state.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import Chromosome, Population
from .objectives import DimensionMismatch, EvalCounter, Objective, counted_eval

__all__ = [
    "EmptyPopulation",
    "OperatorParams",
    "seed_chromosome",
    "select_parents",
    "crossover",
    "mutate",
    "select_discards",
    "elite_ids",
    "breed",
]


class EmptyPopulation(ValueError):
    pass


@dataclass(frozen=True)
class OperatorParams:
    crossover_rate: float = 0.8
    mutation_rate: float = 0.1
    tournament_size: int = 2
    mutation_sigma_fraction: float = 0.5
    elitism_count: int = 1
    mutation_mode: str = "gene"

    @classmethod
    def from_config(cls, cfg) -> "OperatorParams":
        return cls(cfg.crossover_rate, cfg.mutation_rate, cfg.tournament_size,
                   cfg.mutation_sigma_fraction, cfg.elitism_count, cfg.mutation_mode)


def seed_chromosome(rng, obj: Objective, counter: EvalCounter, now: int,
                    ids: Iterator[int]) -> Chromosome:
    """Draw a uniform random chromosome inside the objective's box."""
    genes = rng.uniform(obj.low, obj.high)
    return Chromosome(next(ids), genes, now, counted_eval(obj, counter, genes))


def _tournament(members, rng, size: int) -> Chromosome:
    picks = rng.sample_indices(len(members), size)
    return min((members[i] for i in picks), key=lambda m: m.fitness)


def select_parents(pop, rng, params: OperatorParams):
    """Two independent tournaments; the lowest fitness wins each.

    The tournament size is capped at the population size, so a single
    member is returned twice.
    """
    members = pop.members if isinstance(pop, Population) else list(pop)
    if not members:
        raise EmptyPopulation("cannot select parents from an empty population")
    size = min(params.tournament_size, len(members))
    return _tournament(members, rng, size), _tournament(members, rng, size)


def crossover(a: Chromosome, b: Chromosome, rng, params: OperatorParams):
    """Arithmetic blend crossover.

    With probability ``crossover_rate`` draws ``lam ~ U[0, 1]`` and returns
    ``lam*a + (1-lam)*b`` and ``(1-lam)*a + lam*b``; otherwise copies of the
    parents' genes.
    """
    ga, gb = np.asarray(a.genes, dtype=float), np.asarray(b.genes, dtype=float)
    if ga.shape != gb.shape:
        raise DimensionMismatch(f"parent gene shapes differ: {ga.shape} vs {gb.shape}")
    if rng.random() >= params.crossover_rate:
        return ga.copy(), gb.copy()
    lam = rng.random()
    return blend(ga, gb, lam)


def blend(ga: np.ndarray, gb: np.ndarray, lam: float):
    c1 = lam * ga + (1.0 - lam) * gb
    c2 = (1.0 - lam) * ga + lam * gb
    # rounding can push a convex combination one ulp past the parents' hull
    lo, hi = np.minimum(ga, gb), np.maximum(ga, gb)
    return np.clip(c1, lo, hi), np.clip(c2, lo, hi)


def mutate(genes, rng, obj: Objective, params: OperatorParams) -> np.ndarray:
    """Gaussian perturbation, clamped back into the box.

    The standard deviation per dimension is ``mutation_sigma_fraction`` times
    the box width. In ``"chromosome"`` mode one draw against
    ``mutation_rate`` decides whether every gene moves; in ``"gene"`` mode
    each gene makes its own draw.
    """
    genes = np.asarray(genes, dtype=float)
    sigma = params.mutation_sigma_fraction * obj.width
    if params.mutation_mode == "gene":
        mask = rng.uniform(0.0, 1.0, genes.shape) < params.mutation_rate
        if not mask.any():
            return genes.copy()
        step = np.where(mask, rng.normal(sigma), 0.0)
    else:
        if rng.random() >= params.mutation_rate:
            return genes.copy()
        step = rng.normal(sigma)
    return np.clip(genes + step, obj.low, obj.high)


def elite_ids(members, elitism_count: int) -> set[int]:
    """Ids of the ``elitism_count`` best members (lowest fitness, then smallest id)."""
    if elitism_count <= 0:
        return set()
    ranked = sorted(members, key=lambda m: (m.fitness, m.id))
    return {m.id for m in ranked[:elitism_count]}


def select_discards(pop, l_min: int, s_dispose: int, elitism_count: int) -> list[int]:
    """Pick up to ``s_dispose`` members to discard, worst fitness first.

    Only members with ``age >= l_min`` are eligible, and the elite members of
    the whole population are never chosen. Ties go to the older member, then
    to the smaller id. An empty list is a normal result.
    """
    members = pop.members if isinstance(pop, Population) else list(pop)
    protected = elite_ids(members, elitism_count)
    eligible = [m for m in members if m.age >= l_min and m.id not in protected]
    eligible.sort(key=lambda m: (-m.fitness, -m.age, m.id))
    return [m.id for m in eligible[:max(0, s_dispose)]]


def breed(pop, n: int, rng, obj: Objective, counter: EvalCounter, now: int,
          ids: Iterator[int], params: OperatorParams) -> list[Chromosome]:
    """Produce ``n`` evaluated offspring from parents in ``pop``.

    Children come in pairs from one crossover; an odd ``n`` drops the second
    child of the last pair.
    """
    members = pop.members if isinstance(pop, Population) else list(pop)
    children: list[Chromosome] = []
    while len(children) < n:
        a, b = select_parents(members, rng, params)
        for genes in crossover(a, b, rng, params):
            if len(children) == n:
                break
            genes = mutate(genes, rng, obj, params)
            children.append(
                Chromosome(next(ids), genes, now, counted_eval(obj, counter, genes)))
    return children


def id_source(start: int = 0) -> Iterator[int]:
    return itertools.count(start)
