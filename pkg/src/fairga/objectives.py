"""Benchmark objective functions and evaluation metering.

Both functions are minimized on a box. ``BERLICH_BOUNDS`` and
``SCHWEFEL_BOUNDS`` are the default search domains.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "OutOfBounds",
    "DimensionMismatch",
    "Objective",
    "EvalCounter",
    "berlich",
    "schwefel",
    "eval_berlich",
    "eval_schwefel",
    "counted_eval",
    "get_objective",
    "OBJECTIVES",
    "SCHWEFEL_ARGMIN",
    "make_berlich",
    "make_schwefel",
]

BERLICH_BOUNDS = (-10.0, 10.0)
SCHWEFEL_BOUNDS = (-500.0, 500.0)
SCHWEFEL_ARGMIN = 420.968746


class OutOfBounds(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def berlich(x) -> float:
    """Berlich noisy parabola, ``(cos(s) + 2) * s`` with ``s = sum(x**2)``.

    Deterministic despite the name; minimum 0 at the origin.
    """
    s = float(np.dot(x, x))
    return (np.cos(s) + 2.0) * s


def schwefel(x) -> float:
    """Half-scaled Schwefel function ``-0.5 * sum(x * sin(sqrt(|x|)))``."""
    x = np.asarray(x, dtype=float)
    return float(-0.5 * np.sum(x * np.sin(np.sqrt(np.abs(x)))))


@dataclass(frozen=True)
class Objective:
    """A box-bounded minimization problem.

    ``func`` must be a pure function of the gene array. ``optimum`` is the
    known global minimum value, when there is one; the comparison harness
    uses it for threshold detection.
    """

    name: str
    dimension: int
    bounds: np.ndarray
    func: Callable[[np.ndarray], float]
    optimum: Optional[float] = None

    def __post_init__(self):
        bounds = np.array(self.bounds, dtype=float).reshape(-1, 2)
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if bounds.shape[0] == 1 and self.dimension > 1:
            bounds = np.repeat(bounds, self.dimension, axis=0)
        if bounds.shape != (self.dimension, 2):
            raise DimensionMismatch(
                f"bounds shape {bounds.shape} does not match dimension {self.dimension}")
        if not np.all(bounds[:, 0] < bounds[:, 1]):
            raise ValueError("every lower bound must be strictly below its upper bound")
        bounds.setflags(write=False)
        object.__setattr__(self, "bounds", bounds)

    @property
    def low(self) -> np.ndarray:
        return self.bounds[:, 0]

    @property
    def high(self) -> np.ndarray:
        return self.bounds[:, 1]

    @property
    def width(self) -> np.ndarray:
        return self.bounds[:, 1] - self.bounds[:, 0]

    def check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise DimensionMismatch(
                f"{self.name} expects {self.dimension} genes, got shape {x.shape}")
        if np.any(x < self.low) or np.any(x > self.high) or not np.all(np.isfinite(x)):
            raise OutOfBounds(f"{x} lies outside the {self.name} box")
        return x

    def __call__(self, x) -> float:
        return float(self.func(self.check(x)))


class EvalCounter:
    """Counts objective evaluations; one evaluation is one a.u."""

    def __init__(self, count: int = 0):
        self.count = count

    def __repr__(self) -> str:
        return f"EvalCounter(count={self.count})"


def counted_eval(obj: Objective, counter: EvalCounter, x) -> float:
    value = obj(x)
    counter.count += 1
    return value


def make_berlich(dimension: int = 2, bounds=BERLICH_BOUNDS) -> Objective:
    return Objective("berlich", dimension, bounds, berlich, optimum=0.0)


def make_schwefel(dimension: int = 2, bounds=SCHWEFEL_BOUNDS) -> Objective:
    return Objective("schwefel", dimension, bounds, schwefel,
                     optimum=schwefel(np.full(dimension, SCHWEFEL_ARGMIN)))


OBJECTIVES = {"berlich": make_berlich, "schwefel": make_schwefel}

_DEFAULT = {name: factory() for name, factory in OBJECTIVES.items()}


def get_objective(name, dimension: int = 2) -> Objective:
    """Look up a benchmark by name; an ``Objective`` is passed through."""
    if isinstance(name, Objective):
        return name
    try:
        factory = OBJECTIVES[str(name).lower()]
    except KeyError:
        raise ValueError(
            f"unknown objective {name!r}; choose from {sorted(OBJECTIVES)}") from None
    return factory(dimension)


def eval_berlich(x) -> float:
    return _DEFAULT["berlich"](x)


def eval_schwefel(x) -> float:
    return _DEFAULT["schwefel"](x)
