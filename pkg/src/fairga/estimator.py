"""Scikit-learn style front end.

The optimizers follow the estimator conventions (constructor stores
parameters verbatim, ``get_params``/``set_params``, ``fit`` returns
``self``, fitted attributes end in ``_``) so they can be cloned and
grid-searched like any other estimator.

>>> opt = FairGAOptimizer(objective="berlich", random_state=3).fit()
>>> opt.trace_.cum_au == opt.expected_au_
True
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .core import FairGaConfig
from .engine import baseline_schedule, expected_au, run_baseline_ga, run_fairga
from .validation import check_gene_matrix, check_objective, check_seed

__all__ = ["FairGAOptimizer", "GAOptimizer"]


class _OptimizerMixin:
    def _config(self, objective) -> FairGaConfig:
        return FairGaConfig(
            s_max=self.s_max, l_min=getattr(self, "l_min", 0),
            s_dispose=getattr(self, "s_dispose", self.s_max),
            r_rampup=getattr(self, "r_rampup", 1.0), n_max=self.n_max,
            crossover_rate=self.crossover_rate, mutation_rate=self.mutation_rate,
            rng_seed=check_seed(self.random_state), objective_id=objective.name,
            tournament_size=self.tournament_size,
            mutation_sigma_fraction=self.mutation_sigma_fraction,
            elitism_count=self.elitism_count, mutation_mode=self.mutation_mode)

    def _store(self, trace, objective, cfg):
        best = trace.population.best() if len(trace.population) else None
        self.objective_ = objective
        self.config_ = cfg
        self.trace_ = trace
        self.schedule_ = trace.schedule
        self.population_ = trace.population
        self.best_genes_ = None if best is None else np.array(best.genes)
        self.best_fitness_ = np.inf if best is None else best.fitness
        self.n_evaluations_ = trace.evaluations
        self.n_iter_ = len(trace.rows)
        return self

    def evaluate(self, X) -> np.ndarray:
        """Objective values of the rows of ``X``, without touching the run's counter."""
        check_is_fitted(self, "trace_")
        X = check_gene_matrix(X, self.objective_)
        return np.array([self.objective_(row) for row in X])


class FairGAOptimizer(_OptimizerMixin, BaseEstimator):
    """Genetic algorithm in which no chromosome leaves before ``l_min`` iterations.

    Parameters
    ----------
    objective : str or Objective
        ``"berlich"``, ``"schwefel"`` or a custom :class:`~fairga.objectives.Objective`.
    s_max : int
        Capacity of the population.
    l_min : int
        Minimum number of iterations a chromosome stays before it may be discarded.
    s_dispose : int
        Most chromosomes discarded in one iteration.
    r_rampup : float
        Fraction of ``s_max`` seeded per ramp-up iteration.
    n_max : int
        Total iterations, exit stage included.
    crossover_rate, mutation_rate : float
        Crossover probability per parent pair; mutation probability per gene
        (or per chromosome when ``mutation_mode="chromosome"``).
    tournament_size, mutation_sigma_fraction, elitism_count, mutation_mode
        Operator settings; see :class:`~fairga.operators.OperatorParams`.
    random_state : int or None
        Seed; ``None`` means 0.

    Attributes
    ----------
    trace_ : RunTrace
    best_genes_, best_fitness_
        Best member of the final population.
    schedule_ : StageSchedule
    expected_au_ : int
        Closed-form a.u. cost; always equal to ``trace_.cum_au``.
    """

    def __init__(self, objective="schwefel", s_max=50, l_min=2, s_dispose=25,
                 r_rampup=0.02, n_max=100, crossover_rate=0.8, mutation_rate=0.1,
                 tournament_size=2, mutation_sigma_fraction=0.5, elitism_count=1,
                 mutation_mode="gene", random_state=None):
        self.objective = objective
        self.s_max = s_max
        self.l_min = l_min
        self.s_dispose = s_dispose
        self.r_rampup = r_rampup
        self.n_max = n_max
        self.crossover_rate = crossover_rate
        self.mutation_rate = mutation_rate
        self.tournament_size = tournament_size
        self.mutation_sigma_fraction = mutation_sigma_fraction
        self.elitism_count = elitism_count
        self.mutation_mode = mutation_mode
        self.random_state = random_state

    def fit(self, X=None, y=None):
        """Run the optimizer. ``X`` and ``y`` are accepted for API symmetry and ignored."""
        objective = check_objective(self.objective)
        cfg = self._config(objective)
        self._store(run_fairga(cfg, objective), objective, cfg)
        self.expected_au_ = expected_au(self.schedule_, cfg)
        return self


class GAOptimizer(_OptimizerMixin, BaseEstimator):
    """Generational GA with elitism, the baseline FairGA is compared against."""

    def __init__(self, objective="schwefel", s_max=50, n_max=100, crossover_rate=0.8,
                 mutation_rate=0.1, tournament_size=2, mutation_sigma_fraction=0.5,
                 elitism_count=1, mutation_mode="gene", random_state=None):
        self.objective = objective
        self.s_max = s_max
        self.n_max = n_max
        self.crossover_rate = crossover_rate
        self.mutation_rate = mutation_rate
        self.tournament_size = tournament_size
        self.mutation_sigma_fraction = mutation_sigma_fraction
        self.elitism_count = elitism_count
        self.mutation_mode = mutation_mode
        self.random_state = random_state

    def fit(self, X=None, y=None):
        objective = check_objective(self.objective)
        cfg = self._config(objective)
        self._store(run_baseline_ga(cfg, objective), objective, cfg)
        self.expected_au_ = expected_au(baseline_schedule(cfg), cfg)
        return self
