"""The full benchmark protocol on the bundled instance.

Ten independent seeded solver runs, gaps against the reference bounds, the
time-to-target statistic, and the CSV/plot-data artifacts the command line
tool writes.  Equivalent CLI invocation:

    sbrp --instance src/sbrp/data/n20q10D.txt --alpha 1 --runs 10 \
         --bounds src/sbrp/data/bounds.txt --out out/ --emit-solution --plot-data
"""

import tempfile
from pathlib import Path

from sbrp.cli import ExperimentConfig, emit_plot_data, format_gap, run_experiment, write_csv
from sbrp.ils import SearchParams
from sbrp.instance import bundled_path

config = ExperimentConfig(
    instances=[bundled_path("n20q10D.txt")],
    alpha=1,
    runs=10,
    params=SearchParams(seed=0),
    bounds_file=bundled_path("bounds.txt"),
    emit_solutions=True,
)
print("running 10 seeded solves on n20q10D (about half a minute)...")
result = run_experiment(config)

print(f"\n{'run':>3} {'seed':>4} {'cost':>6} {'time':>7} {'tt':>6} {'visits':>6}")
for row in result.rows:
    tt = "-" if row.tt_target_s is None else f"{row.tt_target_s:.2f}"
    print(f"{row.run:>3} {row.seed:>4} {int(row.cost):>6} {row.time_s:>6.1f}s "
          f"{tt:>6} {row.visits:>6}")

agg = result.aggregates[0]
print(f"\ngroup {agg.group}: avg gap {format_gap(agg.avg_gap)}%, "
      f"best gap {format_gap(agg.best_gap)}%, avg time {agg.avg_time:.2f}s, "
      f"avg visits {agg.avg_visits:.2f}")
best = min(int(r.cost) for r in result.rows)
print(f"best of 10 runs: {best} (reference optimum 5989)")

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp)
    write_csv(result.rows, out / "runs.csv")
    files = emit_plot_data(result.aggregates, out)
    print("\nartifacts written:", ", ".join(f.name for f in [out / "runs.csv"] + files))
    print("\nruns.csv:")
    print((out / "runs.csv").read_text())
