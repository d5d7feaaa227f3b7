"""The three-stage FairGA loop and a generational GA baseline.

Iterations are numbered from 1; iteration 1 is the initial seeding. Both
engines charge a.u. with the whole-population convention: every ramp-up or
core iteration costs one unit per member present at its end, and exit-stage
iterations cost nothing. Fitness itself is computed once per chromosome, at
creation, and the real evaluation count is kept separately in
``RunTrace.evaluations``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (FairGaConfig, InternalInvariantViolation, Population,
                   RandomSource, RunTrace, TraceRow, age_all, validate_config)
from .objectives import EvalCounter, Objective, get_objective
from .operators import (OperatorParams, breed, elite_ids, id_source,
                        seed_chromosome, select_discards)

__all__ = [
    "StageSchedule",
    "run_fairga",
    "run_baseline_ga",
    "expected_au",
    "baseline_schedule",
]


@dataclass(frozen=True)
class StageSchedule:
    """Stage boundaries of one run, as inclusive last-iteration indices.

    ``additions`` is the population growth per ramp-up iteration; it is
    ``s_max`` for a run that starts full.
    """

    rampup_end: int
    core_end: int
    run_end: int
    additions: int

    def __post_init__(self):
        if not self.rampup_end <= self.core_end <= self.run_end:
            raise ValueError(f"inconsistent schedule {self}")

    def stage_of(self, t: int) -> str:
        if t <= self.rampup_end:
            return "rampup"
        if t <= self.core_end:
            return "core"
        return "exit"


def baseline_schedule(cfg: FairGaConfig) -> StageSchedule:
    """Schedule shape of the baseline GA: full from iteration 1, no exit stage."""
    return StageSchedule(min(1, cfg.n_max), cfg.n_max, cfg.n_max, cfg.s_max)


def expected_au(schedule: StageSchedule, cfg: FairGaConfig) -> int:
    """Closed-form whole-population a.u. for a run with this schedule."""
    t = np.arange(1, schedule.rampup_end + 1)
    ramp = int(np.minimum(schedule.additions * t, cfg.s_max).sum())
    return ramp + (schedule.core_end - schedule.rampup_end) * cfg.s_max


class _Run:
    """Mutable state of one run; engines drive it iteration by iteration."""

    def __init__(self, cfg: FairGaConfig, obj: Objective):
        self.cfg = cfg
        self.obj = obj
        self.params = OperatorParams.from_config(cfg)
        self.rng = RandomSource(cfg.rng_seed)
        self.counter = EvalCounter()
        self.ids = id_source()
        self.pop = Population(cfg.s_max)
        self.trace = RunTrace(population=self.pop)
        self.cum_au = 0

    def seed(self, n: int, t: int) -> None:
        for _ in range(n):
            c = seed_chromosome(self.rng, self.obj, self.counter, t, self.ids)
            self.pop.add(c)
            self.trace.record_birth(c)

    def replace(self, discard_ids: list[int], t: int, l_min: int) -> None:
        """Swap the given members for freshly bred offspring.

        Parents are drawn from the population before anyone leaves it.
        """
        if not discard_ids:
            return
        children = breed(self.pop, len(discard_ids), self.rng, self.obj,
                         self.counter, t, self.ids, self.params)
        for gone in self.pop.remove(discard_ids):
            if gone.age < l_min or t - gone.created_at < l_min:
                raise InternalInvariantViolation(
                    f"chromosome {gone.id} discarded at age {gone.age} < l_min={l_min}")
            self.trace.record_discard(gone, t)
        for c in children:
            self.pop.add(c)
            self.trace.record_birth(c)

    def record(self, t: int, stage: str, charge: bool = True) -> None:
        if charge:
            self.cum_au += len(self.pop)
        fit = self.pop.fitness()
        self.trace.rows.append(TraceRow(
            t, stage, len(self.pop), float(fit.min()), float(fit.mean()), self.cum_au))

    def finish(self, schedule: StageSchedule) -> RunTrace:
        self.trace.evaluations = self.counter.count
        self.trace.schedule = schedule
        return self.trace


def run_fairga(cfg: FairGaConfig, obj: Objective | str | None = None) -> RunTrace:
    """Run FairGA: ramp-up, core and exit stages.

    Ramp-up adds ``cfg.additions_per_iteration`` seeds per iteration (the last
    step truncated so the population lands on ``s_max``) and ends the first
    iteration the population is full. Core iterations replace up to
    ``s_dispose`` members aged at least ``l_min`` until iteration
    ``n_max - l_min``. The exit stage only ages the population.

    If the population cannot fill before ``n_max - l_min``, ramp-up is cut
    there and the run goes straight to the exit stage.
    """
    cfg = validate_config(cfg)
    obj = get_objective(obj if obj is not None else cfg.objective_id)
    run = _Run(cfg, obj)
    s_max, l_min = cfg.s_max, cfg.l_min
    k = cfg.additions_per_iteration
    core_end = cfg.n_max - l_min

    t = 1
    run.seed(min(k, s_max), t)
    run.record(t, "rampup")
    while len(run.pop) < s_max and t < core_end:
        t += 1
        age_all(run.pop)
        run.seed(min(k, run.pop.free), t)
        run.replace(select_discards(run.pop, l_min, cfg.s_dispose, cfg.elitism_count),
                    t, l_min)
        run.record(t, "rampup")
    rampup_end = t

    while t < core_end:
        t += 1
        age_all(run.pop)
        run.replace(select_discards(run.pop, l_min, cfg.s_dispose, cfg.elitism_count),
                    t, l_min)
        if len(run.pop) != s_max:
            raise InternalInvariantViolation(
                f"core-stage population size {len(run.pop)} != s_max={s_max}")
        run.record(t, "core")

    while t < cfg.n_max:
        t += 1
        age_all(run.pop)
        run.record(t, "exit", charge=False)

    return run.finish(StageSchedule(rampup_end, core_end, cfg.n_max, k))


def run_baseline_ga(cfg: FairGaConfig, obj: Objective | str | None = None) -> RunTrace:
    """Generational GA with elitism.

    Starts from ``s_max`` random chromosomes; each later iteration keeps the
    ``elitism_count`` best members and fills the rest of the generation with
    offspring. ``l_min``, ``s_dispose`` and ``r_rampup`` are ignored.
    """
    validate_config(cfg.replace(l_min=0, s_dispose=cfg.s_max, r_rampup=1.0,
                                n_max=max(cfg.n_max, 1)))
    if cfg.n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {cfg.n_max}")
    obj = get_objective(obj if obj is not None else cfg.objective_id)
    run = _Run(cfg, obj)
    schedule = baseline_schedule(cfg)
    if cfg.n_max == 0:
        return run.finish(schedule)

    run.seed(cfg.s_max, 1)
    run.record(1, "core")
    for t in range(2, cfg.n_max + 1):
        age_all(run.pop)
        keep = elite_ids(run.pop.members, cfg.elitism_count)
        run.replace([m.id for m in run.pop if m.id not in keep], t, 0)
        run.record(t, "core")
    return run.finish(schedule)
