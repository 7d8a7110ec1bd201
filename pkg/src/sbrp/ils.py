"""Multi-start iterated local search driver.

Each restart builds a fresh greedy-randomized solution and then alternates
perturbation, one repair attempt when needed, and RVND until the count of
consecutive non-improving attempts reaches the iteration cap.  Perturbation is
always applied to the restart's best solution; an unrepaired infeasible
solution compares as +inf and is therefore discarded.  Restarts draw from
independent, individually reproducible random streams.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from sbrp.construct import generate_initial
from sbrp.instance import Instance
from sbrp.perturb import Perturbation, add_unbalanced, perturb
from sbrp.search import rvnd
from sbrp.solution import Solution

DEFAULT_PERTURBATIONS = frozenset(
    {Perturbation.ADD_STATIONS, Perturbation.DOUBLE_BRIDGE, Perturbation.SUPPRESSION}
)


@dataclass(frozen=True)
class SearchParams:
    """Control knobs of the solver.

    The per-restart iteration cap is max(i_min, beta * n); defaults follow the
    tuned configuration (10 restarts, i_min 160, beta 4, perturbations
    P2+P3+P4, one hour time limit).
    """

    restarts: int = 10
    i_min: int = 160
    beta: int = 4
    time_limit: float = 3600.0
    perturbations: frozenset = DEFAULT_PERTURBATIONS
    seed: int = 0

    def iteration_cap(self, n: int) -> int:
        return max(self.i_min, self.beta * n)


@dataclass
class RunReport:
    best_cost: float
    best_solution: Solution | None
    restart_costs: list[float] = field(default_factory=list)
    wall_time: float = 0.0
    iterations: int = 0
    truncated: bool = False
    improvements: list[tuple[float, float]] = field(default_factory=list)

    @property
    def visits(self) -> int | None:
        return self.best_solution.visits if self.best_solution else None


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed % 2**64, restart]))


def solve(instance: Instance, params: SearchParams = SearchParams()) -> RunReport:
    """Run the multi-start ILS and return the best solution over all restarts."""
    t0 = time.perf_counter()
    deadline = t0 + params.time_limit
    cap = params.iteration_cap(instance.n)
    report = RunReport(best_cost=math.inf, best_solution=None)

    def out_of_time() -> bool:
        return time.perf_counter() >= deadline

    def record(candidate: Solution) -> None:
        if candidate.objective < report.best_cost:
            report.best_cost = candidate.objective
            report.best_solution = candidate
            report.improvements.append((time.perf_counter() - t0, candidate.objective))

    scan_cache: dict = {}
    for restart in range(params.restarts):
        if out_of_time():
            report.truncated = True
            break
        rng = _restart_rng(params.seed, restart)
        current = generate_initial(instance, rng)
        restart_best: Solution | None = None
        iter_ils = 0
        while iter_ils < cap:
            if out_of_time():
                report.truncated = True
                break
            if not current.feasible:
                current = add_unbalanced(current, instance)
            current = rvnd(current, instance, rng, deadline, scan_cache)
            report.iterations += 1
            if restart_best is None or current.objective < restart_best.objective:
                restart_best = current
                iter_ils = 0
                record(restart_best)
            current = perturb(restart_best, instance, params.perturbations, rng)
            iter_ils += 1
        if restart_best is not None:
            report.restart_costs.append(restart_best.objective)
            record(restart_best)
    report.wall_time = time.perf_counter() - t0
    return report


def time_to_target(report: RunReport, reference_cost: float) -> float | None:
    """First wall-clock instant the incumbent matched or beat the reference."""
    for t, cost in report.improvements:
        if cost <= reference_cost:
            return t
    return None
