"""Quasi steady-state resource-flow model with and without a lifetime floor.

Products in use (``prod_vol`` of them, each built from ``res_r`` units of
resource) are replaced once per average lifetime. A fraction ``recy_r`` of
retired products is recycled and ``res_rec`` of that is recovered, so the
manufacturing input splits into recovered material and virgin extraction.
Enforcing a minimum lifetime stretches the average lifetime by ``life_r``
and scales both flows down by the same factor.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass

__all__ = [
    "InvalidParams",
    "FlowModelParams",
    "ScenarioReport",
    "extraction_rate",
    "returned_rate",
    "compare_scenarios",
]


class InvalidParams(ValueError):
    pass


@dataclass(frozen=True)
class FlowModelParams:
    res_r: float = 1.0
    prod_vol: float = 1.0
    recy_r: float = 0.3
    res_rec: float = 0.8
    life_0: float = 1.0
    life_r: float = 1.5

    def validate(self) -> "FlowModelParams":
        for name, value in asdict(self).items():
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidParams(f"{name} must be a finite number, got {value!r}")
        for name in ("res_r", "prod_vol", "life_0"):
            if getattr(self, name) <= 0:
                raise InvalidParams(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("recy_r", "res_rec"):
            if not 0 <= getattr(self, name) <= 1:
                raise InvalidParams(f"{name} must lie in [0, 1], got {getattr(self, name)}")
        if self.life_r < 1:
            raise InvalidParams(f"life_r must be >= 1, got {self.life_r}")
        return self

    @property
    def recovered_fraction(self) -> float:
        return self.recy_r * self.res_rec

    def lifetime(self, with_fairga: bool) -> float:
        return self.life_0 * self.life_r if with_fairga else self.life_0


def extraction_rate(p: FlowModelParams, with_fairga: bool = False) -> float:
    """Virgin resource volume extracted per unit time."""
    p.validate()
    return p.res_r * p.prod_vol * (1.0 - p.recovered_fraction) / p.lifetime(with_fairga)


def returned_rate(p: FlowModelParams, with_fairga: bool = False) -> float:
    """Recovered resource volume returned to manufacturing per unit time."""
    p.validate()
    return p.res_r * p.prod_vol * p.recovered_fraction / p.lifetime(with_fairga)


@dataclass(frozen=True)
class ScenarioReport:
    params: FlowModelParams
    extraction_baseline: float
    extraction_fairga: float
    returned_baseline: float
    returned_fairga: float
    reduction_factor: float

    def rows(self) -> list[tuple[str, float, float]]:
        return [
            ("extraction", self.extraction_baseline, self.extraction_fairga),
            ("returned", self.returned_baseline, self.returned_fairga),
        ]

    def to_text(self, digits: int = 2) -> str:
        lines = [f"{'flow':<12}{'baseline':>12}{'fairga':>12}"]
        for name, base, fair in self.rows():
            lines.append(f"{name:<12}{base:>12.{digits}f}{fair:>12.{digits}f}")
        lines.append(f"{'reduction':<12}{self.reduction_factor:>24.{digits}f}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["flow", "baseline", "fairga"])
        for name, base, fair in self.rows():
            w.writerow([name, repr(base), repr(fair)])
        w.writerow(["reduction_factor", repr(self.reduction_factor), repr(self.reduction_factor)])
        return buf.getvalue()


def compare_scenarios(p: FlowModelParams) -> ScenarioReport:
    """Both flows under both scenarios.

    The reduction factor is ``life_r`` itself: the ratio of the two
    extraction rates is exactly that whenever extraction is non-zero.
    """
    p.validate()
    return ScenarioReport(
        params=p,
        extraction_baseline=extraction_rate(p, False),
        extraction_fairga=extraction_rate(p, True),
        returned_baseline=returned_rate(p, False),
        returned_fairga=returned_rate(p, True),
        reduction_factor=float(p.life_r),
    )
