import numpy as np
import pytest

from fairga.core import Chromosome, FairGaConfig, Population


def make_population(ages, fitnesses, capacity=None, genes=None):
    """Population with members 0..n-1 of the given ages and fitness values."""
    n = len(ages)
    pop = Population(capacity or max(n, 1))
    for i, (age, fit) in enumerate(zip(ages, fitnesses)):
        g = np.zeros(2) if genes is None else np.asarray(genes[i], dtype=float)
        pop.add(Chromosome(i, g, created_at=-age, fitness=float(fit), age=age))
    return pop


@pytest.fixture
def small_cfg():
    return FairGaConfig(s_max=12, l_min=3, s_dispose=4, r_rampup=0.25, n_max=30,
                        rng_seed=7)


ACCEPTANCE: dict = {}


def record_acceptance(number, title, ok, detail=""):
    ACCEPTANCE[number] = (title, bool(ok), detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
