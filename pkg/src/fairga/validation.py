"""Input validation helpers for the estimator front end."""

from __future__ import annotations

import numbers

import numpy as np

from .objectives import Objective, get_objective

__all__ = ["check_seed", "check_objective", "check_gene_matrix"]


def check_seed(random_state) -> int:
    """Turn ``random_state`` into an integer seed.

    ``None`` maps to 0 so that unseeded estimators stay reproducible.
    """
    if random_state is None:
        return 0
    if isinstance(random_state, numbers.Integral) and not isinstance(random_state, bool):
        if random_state < 0:
            raise ValueError(f"random_state must be non-negative, got {random_state}")
        return int(random_state)
    raise TypeError(f"random_state must be None or a non-negative int, got {random_state!r}")


def check_objective(objective, dimension: int = 2) -> Objective:
    if isinstance(objective, Objective):
        return objective
    if isinstance(objective, str):
        return get_objective(objective, dimension)
    raise TypeError(f"objective must be a name or an Objective, got {type(objective).__name__}")


def check_gene_matrix(X, objective: Objective) -> np.ndarray:
    """Validate a 2-D array of candidate solutions against the objective's box."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != objective.dimension:
        raise ValueError(
            f"expected shape (n_samples, {objective.dimension}), got {X.shape}")
    for row in X:
        objective.check(row)
    return X
