"""Domain types shared by the FairGA and baseline GA engines."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

__all__ = [
    "ConfigError",
    "RampExceedsDisposal",
    "ExitDoesNotFit",
    "ZeroDisposal",
    "InvalidParameter",
    "CapacityExceeded",
    "InternalInvariantViolation",
    "RandomSource",
    "Chromosome",
    "Population",
    "FairGaConfig",
    "TraceRow",
    "LedgerEntry",
    "RunTrace",
    "STAGES",
    "ramp_additions",
    "validate_config",
    "age_all",
]

STAGES = ("rampup", "core", "exit")


class ConfigError(ValueError):
    """Base class for configuration validation failures."""


class RampExceedsDisposal(ConfigError):
    """More chromosomes would be added per ramp-up iteration than can be disposed."""


class ExitDoesNotFit(ConfigError):
    """The exit stage (``l_min`` waiting iterations) does not fit inside ``n_max``."""


class ZeroDisposal(ConfigError):
    """``s_dispose`` is zero, so the population could never be refreshed."""


class InvalidParameter(ConfigError):
    """A field is outside its admissible range."""


class CapacityExceeded(RuntimeError):
    pass


class InternalInvariantViolation(AssertionError):
    """Raised by the engine guards; reaching it means a bug, not bad input."""


class RandomSource:
    """Seedable random stream passed explicitly to every stochastic operation.

    Wraps a PCG64 bit generator, so two sources built from the same seed
    produce the same draws in the same order.
    """

    def __init__(self, seed: int = 0):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def random(self) -> float:
        return float(self._gen.random())

    def uniform(self, low, high, size=None):
        return self._gen.uniform(low, high, size)

    def normal(self, scale):
        return self._gen.normal(0.0, scale)

    def sample_indices(self, n: int, k: int) -> np.ndarray:
        """Draw ``k`` distinct indices from ``range(n)``."""
        return self._gen.choice(n, size=k, replace=False)

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed})"


@dataclass(eq=False)
class Chromosome:
    """One candidate solution.

    Identity is the integer ``id``; two chromosomes with equal genes are still
    distinct individuals.
    """

    id: int
    genes: np.ndarray
    created_at: int
    fitness: float
    age: int = 0

    def __repr__(self) -> str:
        return (f"Chromosome(id={self.id}, created_at={self.created_at}, "
                f"age={self.age}, fitness={self.fitness!r})")


class Population:
    """Ordered live collection of chromosomes with a hard capacity."""

    def __init__(self, capacity: int, members: Iterable[Chromosome] = ()):
        if capacity < 1:
            raise ValueError(f"capacity must be positive, got {capacity}")
        self.capacity = int(capacity)
        self.members: list[Chromosome] = []
        for c in members:
            self.add(c)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Chromosome]:
        return iter(self.members)

    def __getitem__(self, i: int) -> Chromosome:
        return self.members[i]

    @property
    def free(self) -> int:
        return self.capacity - len(self.members)

    def add(self, chromosome: Chromosome) -> None:
        if len(self.members) >= self.capacity:
            raise CapacityExceeded(
                f"population already holds {self.capacity} members")
        if any(m.id == chromosome.id for m in self.members):
            raise ValueError(f"duplicate chromosome id {chromosome.id}")
        self.members.append(chromosome)

    def remove(self, ids: Iterable[int]) -> list[Chromosome]:
        """Remove members by id, preserving the order of the rest."""
        ids = set(ids)
        gone = [m for m in self.members if m.id in ids]
        if len(gone) != len(ids):
            raise KeyError(f"ids not in population: {ids - {m.id for m in gone}}")
        self.members = [m for m in self.members if m.id not in ids]
        return gone

    def ids(self) -> list[int]:
        return [m.id for m in self.members]

    def fitness(self) -> np.ndarray:
        return np.array([m.fitness for m in self.members], dtype=float)

    def best(self) -> Chromosome:
        if not self.members:
            raise ValueError("empty population has no best member")
        return min(self.members, key=lambda m: (m.fitness, m.id))


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class FairGaConfig:
    """All parameters of one run.

    ``rho`` (population refresh ratio) is derived from ``s_dispose / s_max``
    and cannot be set. ``tournament_size``, ``mutation_sigma_fraction``,
    ``elitism_count`` and ``mutation_mode`` are operator settings shared by
    both engines.
    """

    s_max: int = 50
    l_min: int = 2
    s_dispose: int = 25
    r_rampup: float = 0.02
    n_max: int = 100
    crossover_rate: float = 0.8
    mutation_rate: float = 0.1
    rng_seed: int = 0
    objective_id: str = "schwefel"
    tournament_size: int = 2
    mutation_sigma_fraction: float = 0.5
    elitism_count: int = 1
    mutation_mode: str = "gene"

    @property
    def rho(self) -> float:
        return self.s_dispose / self.s_max

    @property
    def additions_per_iteration(self) -> int:
        return ramp_additions(self.r_rampup, self.s_max)

    def replace(self, **changes) -> "FairGaConfig":
        return dataclasses.replace(self, **changes)


def ramp_additions(r_rampup: float, s_max: int) -> int:
    """Seeds added per ramp-up iteration: ``max(1, round(r_rampup * s_max))``.

    Rounds half up so that e.g. 0.5 maps to 1 regardless of float parity rules.
    """
    return max(1, _round_half_up(r_rampup * s_max))


def _is_int(x) -> bool:
    return isinstance(x, (int, np.integer)) and not isinstance(x, bool)


def validate_config(cfg: FairGaConfig) -> FairGaConfig:
    """Return ``cfg`` unchanged if it is runnable, else raise one ConfigError.

    Checks run in a fixed order, so every invalid config maps to exactly one
    named error.
    """
    for name in ("s_max", "l_min", "s_dispose", "n_max", "rng_seed",
                 "tournament_size", "elitism_count"):
        if not _is_int(getattr(cfg, name)):
            raise InvalidParameter(f"{name} must be an integer, got {getattr(cfg, name)!r}")
    if cfg.s_max < 1:
        raise InvalidParameter(f"s_max must be positive, got {cfg.s_max}")
    if cfg.l_min < 0:
        raise InvalidParameter(f"l_min must be non-negative, got {cfg.l_min}")
    if cfg.n_max < 1:
        raise InvalidParameter(f"n_max must be positive, got {cfg.n_max}")
    if cfg.s_dispose == 0:
        raise ZeroDisposal("s_dispose is 0: nobody could ever be discarded")
    if not 0 < cfg.s_dispose <= cfg.s_max:
        raise InvalidParameter(
            f"s_dispose must lie in [1, s_max={cfg.s_max}], got {cfg.s_dispose}")
    if not (isinstance(cfg.r_rampup, (int, float)) and 0 < cfg.r_rampup <= 1):
        raise InvalidParameter(f"r_rampup must lie in (0, 1], got {cfg.r_rampup!r}")
    for name in ("crossover_rate", "mutation_rate"):
        v = getattr(cfg, name)
        if not (isinstance(v, (int, float)) and 0 <= v <= 1):
            raise InvalidParameter(f"{name} must lie in [0, 1], got {v!r}")
    if not 0 < cfg.mutation_sigma_fraction <= 1:
        raise InvalidParameter(
            f"mutation_sigma_fraction must lie in (0, 1], got {cfg.mutation_sigma_fraction!r}")
    if cfg.mutation_mode not in ("chromosome", "gene"):
        raise InvalidParameter(
            f"mutation_mode must be 'chromosome' or 'gene', got {cfg.mutation_mode!r}")
    if cfg.tournament_size < 1:
        raise InvalidParameter(f"tournament_size must be positive, got {cfg.tournament_size}")
    if not 0 <= cfg.elitism_count <= cfg.s_max:
        raise InvalidParameter(
            f"elitism_count must lie in [0, s_max], got {cfg.elitism_count}")
    adds = ramp_additions(cfg.r_rampup, cfg.s_max)
    if adds > cfg.s_dispose:
        raise RampExceedsDisposal(
            f"ramp-up adds {adds} chromosomes per iteration but only "
            f"s_dispose={cfg.s_dispose} can be discarded")
    if cfg.n_max <= cfg.l_min:
        raise ExitDoesNotFit(
            f"n_max={cfg.n_max} leaves no room for an exit stage of l_min={cfg.l_min}")
    return cfg


def age_all(pop: Population) -> Population:
    """Increment every member's age by one, in place."""
    for m in pop.members:
        m.age += 1
    return pop


@dataclass(frozen=True)
class TraceRow:
    iteration: int
    stage: str
    pop_size: int
    best_fitness: float
    mean_fitness: float
    cum_au: int


@dataclass
class LedgerEntry:
    id: int
    created_at: int
    discarded_at: Optional[int] = None  # None: still alive at run end

    @property
    def lifetime(self) -> Optional[int]:
        if self.discarded_at is None:
            return None
        return self.discarded_at - self.created_at


@dataclass
class RunTrace:
    """Everything a run records: per-iteration rows and the custody ledger."""

    rows: list[TraceRow] = field(default_factory=list)
    ledger: dict[int, LedgerEntry] = field(default_factory=dict)
    evaluations: int = 0
    population: Optional[Population] = None
    schedule: Optional[object] = None

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def cum_au(self) -> int:
        return self.rows[-1].cum_au if self.rows else 0

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.rows]

    def best_so_far(self) -> np.ndarray:
        return np.minimum.accumulate(np.array(self.column("best_fitness"), dtype=float))

    def fairness_violations(self, l_min: int) -> list[LedgerEntry]:
        return [e for e in self.ledger.values()
                if e.discarded_at is not None and e.lifetime < l_min]

    def record_birth(self, chromosome: Chromosome) -> None:
        self.ledger[chromosome.id] = LedgerEntry(chromosome.id, chromosome.created_at)

    def record_discard(self, chromosome: Chromosome, iteration: int) -> None:
        self.ledger[chromosome.id].discarded_at = iteration
