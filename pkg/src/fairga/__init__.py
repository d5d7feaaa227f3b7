"""FairGA: genetic optimization where every chromosome gets a minimum lifetime."""

from .core import (ConfigError, ExitDoesNotFit, FairGaConfig, InvalidParameter,
                   Population, RampExceedsDisposal, RandomSource, RunTrace,
                   ZeroDisposal, age_all, validate_config)
from .engine import StageSchedule, expected_au, run_baseline_ga, run_fairga
from .estimator import FairGAOptimizer, GAOptimizer
from .objectives import Objective, get_objective
from .sustainability import FlowModelParams, compare_scenarios

__all__ = [
    "ConfigError", "ExitDoesNotFit", "FairGaConfig", "InvalidParameter",
    "Population", "RampExceedsDisposal", "RandomSource", "RunTrace",
    "ZeroDisposal", "age_all", "validate_config", "StageSchedule",
    "expected_au", "run_baseline_ga", "run_fairga", "FairGAOptimizer",
    "GAOptimizer", "Objective", "get_objective", "FlowModelParams",
    "compare_scenarios",
]

__version__ = "0.1.0"
