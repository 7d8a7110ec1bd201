"""Single-vehicle static bike rebalancing (SBRP) solver.

Stations hold integer bike inventories; one capacitated vehicle must move every
station from its initial level to its target level at minimum travel cost.
Demands may be split over several visits and stations may be used as temporary
buffers or depots, so deciding whether a visit sequence admits a valid
pickup/delivery schedule is itself a flow problem.

The package provides instance handling, the max-flow feasibility check, a
greedy randomized constructor, RVND local search over six neighborhoods, four
perturbation mechanisms plus an unbalanced-station repair, the multi-start ILS
driver, exact enumeration oracles for testing, and a benchmark CLI.
"""

from sbrp.instance import (
    Instance,
    InstanceError,
    Station,
    apply_alpha,
    build_cost_matrix,
    bundled_path,
    load_instance,
    parse_instance,
    parse_legacy,
    serialize_instance,
    validate,
)
from sbrp.maxflow import Arc, FlowNetwork, max_flow
from sbrp.feasibility import (
    FeasibilityResult,
    build_network,
    check,
    check_via_network,
    extract_displacements,
)
from sbrp.solution import (
    Solution,
    evaluate,
    parse_solution,
    rebuild_bookkeeping,
    route_cost,
    serialize_solution,
)
from sbrp.construct import generate_initial
from sbrp.search import Move, Neighborhood, rvnd
from sbrp.perturb import (
    ImbalanceReport,
    Perturbation,
    add_buffer,
    add_stations,
    add_unbalanced,
    double_bridge,
    imbalance_report,
    perturb,
    suppress_random,
)
from sbrp.ils import RunReport, SearchParams, solve, time_to_target
from sbrp.oracle import OracleLimits, enumerate_displacements, exact_solve

__version__ = "0.1.0"
