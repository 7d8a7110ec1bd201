"""Benchmark harness: multi-run experiments, gap reporting, solution checking.

Runs the solver several times per instance with per-run seeds, writes one CSV
row per run plus aggregate rows per instance group, optionally emits solution
files and plot-ready columnar data, and can re-verify emitted solutions
against their instance.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path

from sbrp.feasibility import check
from sbrp.ils import DEFAULT_PERTURBATIONS, RunReport, SearchParams, solve, time_to_target
from sbrp.instance import Instance, load_instance
from sbrp.perturb import Perturbation
from sbrp.solution import parse_solution, route_cost, serialize_solution

CSV_COLUMNS = ["instance", "alpha", "run", "seed", "cost", "feasible",
               "time_s", "tt_target_s", "visits"]


@dataclass(frozen=True)
class Bounds:
    lb: int | None
    ub: int | None


@dataclass
class ExperimentConfig:
    instances: list[Path]
    fmt: str = "canonical"
    alpha: int = 1
    runs: int = 10
    params: SearchParams = SearchParams()
    bounds_file: Path | None = None
    out_dir: Path = Path(".")
    emit_solutions: bool = False
    plot_data: bool = False


@dataclass
class RunRow:
    instance: str
    alpha: int
    run: int
    seed: int
    cost: float
    feasible: bool
    time_s: float
    tt_target_s: float | None
    visits: int

    def as_csv(self) -> list:
        return [self.instance, self.alpha, self.run, self.seed,
                "" if math.isinf(self.cost) else int(self.cost),
                int(self.feasible), f"{self.time_s:.3f}",
                "" if self.tt_target_s is None else f"{self.tt_target_s:.3f}",
                self.visits]


@dataclass
class AggregateRow:
    group: str
    n: int
    q: int
    avg_gap: float | None
    best_gap: float | None
    avg_time: float
    avg_tt: float | None
    avg_visits: float


@dataclass
class ExperimentResult:
    rows: list[RunRow] = field(default_factory=list)
    aggregates: list[AggregateRow] = field(default_factory=list)
    solutions: dict = field(default_factory=dict)
    skipped: list[str] = field(default_factory=list)


def parse_bounds(text: str) -> dict[str, Bounds]:
    out = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        name = parts[0]
        vals = [None if p in ("-", "?") else int(p) for p in parts[1:3]]
        vals += [None] * (2 - len(vals))
        out[name] = Bounds(lb=vals[0], ub=vals[1])
    return out


def gap_percent(cost: float, lb: int) -> float:
    """(cost - lb) / lb in percent."""
    return 100.0 * (cost - lb) / lb


def format_gap(value: float | None) -> str:
    if value is None:
        return ""
    return str(Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN))


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    bounds = {}
    if config.bounds_file is not None:
        bounds = parse_bounds(Path(config.bounds_file).read_text())
    result = ExperimentResult()
    per_instance = []
    for path in config.instances:
        try:
            instance = load_instance(path, fmt=config.fmt, alpha=config.alpha)
        except Exception as exc:
            result.skipped.append(f"{path}: {exc}")
            continue
        ref = bounds.get(instance.name, Bounds(None, None))
        rows = []
        best: RunReport | None = None
        for run in range(config.runs):
            params = replace(config.params, seed=config.params.seed + run)
            report = solve(instance, params)
            tt = None if ref.ub is None else time_to_target(report, ref.ub)
            sol = report.best_solution
            rows.append(RunRow(
                instance=instance.name, alpha=config.alpha, run=run,
                seed=params.seed, cost=report.best_cost,
                feasible=sol is not None and sol.feasible,
                time_s=report.wall_time, tt_target_s=tt,
                visits=sol.visits if sol else 0))
            if best is None or report.best_cost < best.best_cost:
                best = report
        result.rows.extend(rows)
        if config.emit_solutions and best is not None and best.best_solution is not None:
            result.solutions[instance.name] = best.best_solution
        per_instance.append((instance, ref, rows))
    result.aggregates = _aggregate(per_instance)
    return result


def _aggregate(per_instance) -> list[AggregateRow]:
    groups: dict[str, list] = {}
    for instance, ref, rows in per_instance:
        key = f"n{instance.n}q{instance.vehicle_capacity}"
        groups.setdefault(key, []).append((instance, ref, rows))
    out = []
    for key in sorted(groups):
        members = groups[key]
        n = members[0][0].n
        q = members[0][0].vehicle_capacity
        avg_gaps, best_gaps, times, tts, visits = [], [], [], [], []
        for instance, ref, rows in members:
            costs = [r.cost for r in rows if not math.isinf(r.cost)]
            times.extend(r.time_s for r in rows)
            visits.extend(r.visits for r in rows)
            row_tts = [r.tt_target_s for r in rows if r.tt_target_s is not None]
            if row_tts:
                tts.extend(row_tts)
            if ref.lb is not None and costs:
                avg_gaps.append(gap_percent(sum(costs) / len(costs), ref.lb))
                best_gaps.append(gap_percent(min(costs), ref.lb))
        out.append(AggregateRow(
            group=key, n=n, q=q,
            avg_gap=sum(avg_gaps) / len(avg_gaps) if avg_gaps else None,
            best_gap=sum(best_gaps) / len(best_gaps) if best_gaps else None,
            avg_time=sum(times) / len(times) if times else 0.0,
            avg_tt=sum(tts) / len(tts) if tts else None,
            avg_visits=sum(visits) / len(visits) if visits else 0.0))
    return out


def write_csv(rows: list[RunRow], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(row.as_csv())


def write_aggregates(aggregates: list[AggregateRow], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["group", "n", "q", "avg_gap_pct", "best_gap_pct",
                         "avg_time_s", "avg_tt_s", "avg_visits"])
        for a in aggregates:
            writer.writerow([a.group, a.n, a.q, format_gap(a.avg_gap),
                             format_gap(a.best_gap), f"{a.avg_time:.3f}",
                             "" if a.avg_tt is None else f"{a.avg_tt:.3f}",
                             f"{a.avg_visits:.2f}"])


def emit_plot_data(aggregates: list[AggregateRow], out_dir: Path) -> list[Path]:
    """One whitespace-separated file per (metric, grouping key)."""
    if not aggregates:
        raise ValueError("no aggregates to emit")
    metrics = {
        "avg_gap": lambda a: a.avg_gap,
        "best_gap": lambda a: a.best_gap,
        "avg_time": lambda a: a.avg_time,
        "avg_tt": lambda a: a.avg_tt,
        "avg_visits": lambda a: a.avg_visits,
    }
    written = []
    for group_key, attr in (("q", "q"), ("n", "n")):
        buckets: dict[int, list[AggregateRow]] = {}
        for a in aggregates:
            buckets.setdefault(getattr(a, attr), []).append(a)
        for metric, get in metrics.items():
            path = out_dir / f"{metric}_by_{group_key}.dat"
            lines = [f"# {group_key}  {metric}"]
            for key in sorted(buckets):
                vals = [get(a) for a in buckets[key] if get(a) is not None]
                if not vals:
                    continue
                lines.append(f"{key} {sum(vals) / len(vals):.4f}")
            path.write_text("\n".join(lines) + "\n")
            written.append(path)
    return written


def verify_solution(instance: Instance, text: str) -> tuple[bool, str]:
    """Check a serialized solution against its instance.

    Validates the stated cost, the load recurrence and bounds, the station
    inventory trajectory, and that the stated feasibility flag matches the
    flow check on the route.
    """
    cost_stated, feas_stated, route, ops, loads_after = parse_solution(text)
    q = instance.vehicle_capacity
    if route[0] != 0 or route[-1] != 0:
        return False, "route does not start and end at the depot"
    actual_cost = route_cost(route, instance)
    if actual_cost != cost_stated:
        return False, f"stated cost {cost_stated} != recomputed {actual_cost}"
    load = 0
    levels = {s.id: s.initial for s in instance.stations[1:]}
    for j, (sid, op, after) in enumerate(zip(route, ops, loads_after)):
        if load + op != after:
            return False, (f"visit {j} (station {sid}): load {load} + op {op} "
                           f"!= stated load {after}")
        if not 0 <= after <= q:
            return False, f"visit {j} (station {sid}): load {after} outside [0, {q}]"
        if sid != 0:
            levels[sid] -= op
            if not 0 <= levels[sid] <= instance.stations[sid].capacity:
                return False, (f"visit {j}: station {sid} level {levels[sid]} "
                               f"outside [0, {instance.stations[sid].capacity}]")
        load = after
    if load != 0:
        return False, f"vehicle returns with load {load}, expected 0"
    if feas_stated:
        for s in instance.stations[1:]:
            if levels.get(s.id, s.initial) != s.target:
                return False, f"station {s.id} ends at {levels.get(s.id)}, target {s.target}"
    verdict = check(route, instance).feasible
    if verdict != feas_stated:
        return False, f"stated feasible={int(feas_stated)} but flow check says {int(verdict)}"
    return True, "ok"


def _parse_perturbations(text: str) -> frozenset:
    names = {"p1": Perturbation.ADD_BUFFER, "p2": Perturbation.ADD_STATIONS,
             "p3": Perturbation.DOUBLE_BRIDGE, "p4": Perturbation.SUPPRESSION}
    out = set()
    for tok in text.split(","):
        tok = tok.strip().lower()
        if tok not in names:
            raise argparse.ArgumentTypeError(f"unknown perturbation {tok!r}")
        out.add(names[tok])
    return frozenset(out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sbrp",
        description="Single-vehicle bike rebalancing solver and benchmark harness")
    ap.add_argument("--instance", action="append", default=[], type=Path,
                    help="instance file (repeatable)")
    ap.add_argument("--instance-dir", type=Path,
                    help="run every *.txt instance in this directory")
    ap.add_argument("--format", choices=("canonical", "legacy"), default="canonical")
    ap.add_argument("--alpha", type=int, default=1,
                    help="inventory scaling factor (default 1)")
    ap.add_argument("--runs", type=int, default=10, help="runs per instance")
    ap.add_argument("--restarts", type=int, default=10)
    ap.add_argument("--imin", type=int, default=160)
    ap.add_argument("--beta", type=int, default=4)
    ap.add_argument("--perturbations", type=_parse_perturbations,
                    default=DEFAULT_PERTURBATIONS, metavar="p2,p3,p4",
                    help="enabled perturbation mechanisms (default p2,p3,p4)")
    ap.add_argument("--seed", type=int, default=0, help="base seed; run r uses seed+r")
    ap.add_argument("--time-limit", type=float, default=3600.0, metavar="SECS")
    ap.add_argument("--bounds", type=Path, help="reference lb/ub file")
    ap.add_argument("--out", type=Path, default=Path("."), help="output directory")
    ap.add_argument("--emit-solution", action="store_true",
                    help="write the best solution per instance")
    ap.add_argument("--plot-data", action="store_true",
                    help="write per-metric columnar files")
    ap.add_argument("--verify", type=Path, metavar="FILE",
                    help="verify a solution file against --instance and exit")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    instances = list(args.instance)
    if args.instance_dir:
        instances.extend(sorted(args.instance_dir.glob("*.txt")))
    if args.verify is not None:
        if len(instances) != 1:
            print("--verify needs exactly one --instance", file=sys.stderr)
            return 1
        inst = load_instance(instances[0], fmt=args.format, alpha=args.alpha)
        ok, message = verify_solution(inst, args.verify.read_text())
        print(f"{args.verify}: {message}")
        return 0 if ok else 2
    if not instances:
        print("no instances given (use --instance or --instance-dir)", file=sys.stderr)
        return 1
    params = SearchParams(restarts=args.restarts, i_min=args.imin, beta=args.beta,
                          time_limit=args.time_limit,
                          perturbations=args.perturbations, seed=args.seed)
    config = ExperimentConfig(
        instances=instances, fmt=args.format, alpha=args.alpha, runs=args.runs,
        params=params, bounds_file=args.bounds, out_dir=args.out,
        emit_solutions=args.emit_solution, plot_data=args.plot_data)
    try:
        result = run_experiment(config)
    except Exception as exc:  # pragma: no cover - top-level guard
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    args.out.mkdir(parents=True, exist_ok=True)
    write_csv(result.rows, args.out / "runs.csv")
    write_aggregates(result.aggregates, args.out / "aggregates.csv")
    for name, sol in result.solutions.items():
        (args.out / f"{name}.sol").write_text(serialize_solution(sol))
    if args.plot_data and result.aggregates:
        emit_plot_data(result.aggregates, args.out)
    for a in result.aggregates:
        print(f"{a.group}: avg_gap={format_gap(a.avg_gap) or '-'}% "
              f"best_gap={format_gap(a.best_gap) or '-'}% "
              f"avg_time={a.avg_time:.2f}s avg_visits={a.avg_visits:.2f}")
    for msg in result.skipped:
        print(f"skipped: {msg}", file=sys.stderr)
    return 2 if result.skipped else 0


if __name__ == "__main__":
    raise SystemExit(main())
