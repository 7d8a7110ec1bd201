"""Problem instances: stations, inventory scaling, and the integer cost matrix.

The on-disk format stores only coordinates and raw demands; inventories are
derived at load time (initial = 10*alpha, target = (10+d)*alpha, capacity =
20*alpha) and distances are always recomputed as floor(Euclidean) so the
rounding convention is applied uniformly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class InstanceError(ValueError):
    """Malformed or inconsistent instance document."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Station:
    """One station (id 0 is the depot, which holds no bikes)."""

    id: int
    x: float
    y: float
    demand: int  # target - initial; > 0 receives bikes, < 0 sheds bikes
    initial: int
    target: int
    capacity: int


@dataclass(frozen=True, eq=False)
class Instance:
    """Immutable problem data: stations, vehicle capacity and cost matrix.

    initials/targets/capacities are per-station int64 arrays (index = station
    id) kept alongside for the compiled kernels.
    """

    name: str
    n: int
    vehicle_capacity: int
    stations: tuple[Station, ...]
    cost: np.ndarray  # (n+1) x (n+1) int64, floor(Euclidean)
    alpha: int = 1

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.name == other.name and self.n == other.n
                and self.vehicle_capacity == other.vehicle_capacity
                and self.stations == other.stations
                and self.alpha == other.alpha
                and np.array_equal(self.cost, other.cost))

    def __post_init__(self):
        self.cost.setflags(write=False)
        for name, attr in (("initials", "initial"), ("targets", "target"),
                           ("capacities", "capacity")):
            arr = np.array([getattr(s, attr) for s in self.stations], dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def demands(self) -> tuple[int, ...]:
        return tuple(s.demand for s in self.stations)

    def station(self, i: int) -> Station:
        return self.stations[i]


def apply_alpha(raw_demands: Sequence[int], alpha: int) -> list[tuple[int, int, int]]:
    """Turn raw demands into (initial, target, capacity) triples.

    Index 0 is the depot and must have demand 0; its triple is (0, 0, 0).
    Raw demands must lie in [-10, 10].
    """
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    triples = []
    for i, d in enumerate(raw_demands):
        if i == 0:
            if d != 0:
                raise ValueError("depot demand must be 0")
            triples.append((0, 0, 0))
            continue
        if not -10 <= d <= 10:
            raise ValueError(f"raw demand {d} at station {i} outside [-10, 10]")
        triples.append((alpha * 10, alpha * (10 + d), alpha * 20))
    return triples


def _floor_sqrt_fraction(num: int, den: int) -> int:
    """floor(sqrt(num/den)) in exact integer arithmetic."""
    k = math.isqrt(num // den)
    while (k + 1) * (k + 1) * den <= num:
        k += 1
    while k * k * den > num:
        k -= 1
    return k


def build_cost_matrix(coords: Sequence[tuple]) -> np.ndarray:
    """Floor-rounded Euclidean distance matrix (symmetric, zero diagonal).

    Values at the rounding boundary are settled by exact comparison of squared
    distances, so results do not depend on platform float behaviour.  Flooring
    may break the triangle inequality by a unit or two; that is accepted.
    """
    m = len(coords)
    if m < 2:
        raise ValueError("need at least 2 points")
    pts = [(Fraction(x), Fraction(y)) for x, y in coords]
    cost = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        xi, yi = pts[i]
        for j in range(i + 1, m):
            dx = xi - pts[j][0]
            dy = yi - pts[j][1]
            sq = dx * dx + dy * dy
            d = _floor_sqrt_fraction(sq.numerator, sq.denominator)
            cost[i, j] = d
            cost[j, i] = d
    return cost


def validate(instance: Instance) -> list[str]:
    """Return every violated invariant (empty list means the instance is ok)."""
    problems = []
    st = instance.stations
    if len(st) != instance.n + 1:
        problems.append(f"expected {instance.n + 1} stations, got {len(st)}")
    depot = st[0]
    if (depot.initial, depot.target, depot.capacity) != (0, 0, 0):
        problems.append("depot must have initial = target = capacity = 0")
    for s in st:
        if s.target - s.initial != s.demand:
            problems.append(f"station {s.id}: target - initial != demand")
        if not 0 <= s.initial <= s.capacity:
            problems.append(f"station {s.id}: initial level outside [0, capacity]")
        if not 0 <= s.target <= s.capacity:
            problems.append(f"station {s.id}: target exceeds capacity or is negative")
        if abs(s.demand) > s.capacity and s.id != 0:
            problems.append(f"station {s.id}: demand exceeds station capacity")
    if sum(s.demand for s in st) != 0:
        problems.append("demand sum nonzero")
    c = instance.cost
    if c.shape != (len(st), len(st)):
        problems.append("cost matrix shape mismatch")
    else:
        if (c < 0).any():
            problems.append("cost matrix has negative entries")
        if (np.diag(c) != 0).any():
            problems.append("cost matrix has nonzero diagonal")
        if (c != c.T).any():
            problems.append("cost matrix not symmetric")
    return problems


def _build(name, n, capacity, rows, alpha) -> Instance:
    try:
        triples = apply_alpha([d for _, _, _, d in rows], alpha)
    except ValueError as exc:
        raise InstanceError(str(exc))
    stations = tuple(
        Station(i, float(x), float(y), (t[1] - t[0]), t[0], t[1], t[2])
        for (i, (_, x, y, _), t) in zip(range(n + 1), rows, triples)
    )
    cost = build_cost_matrix([(x, y) for _, x, y, _ in rows])
    inst = Instance(name, n, capacity, stations, cost, alpha)
    problems = validate(inst)
    if problems:
        raise InstanceError("; ".join(problems))
    return inst


def parse_instance(text: str, alpha: int = 1, name: str = "") -> Instance:
    """Parse the canonical format: "n Q" then n+1 lines "id x y d" (id 0 first).

    Lines starting with '#' and blank lines are ignored.  Alpha is applied to
    turn raw demands into station inventories.
    """
    rows = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise InstanceError("expected header 'n Q'", lineno)
            try:
                header = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise InstanceError("non-integer header fields", lineno)
            if header[0] < 1 or header[1] < 1:
                raise InstanceError("n and Q must be positive", lineno)
            continue
        if len(parts) != 4:
            raise InstanceError(f"expected 'id x y d', got {len(parts)} fields", lineno)
        try:
            sid = int(parts[0])
            x = Fraction(parts[1])
            y = Fraction(parts[2])
            d = int(parts[3])
        except (ValueError, ZeroDivisionError):
            raise InstanceError("malformed station row", lineno)
        expected = len(rows)
        if sid != expected:
            if any(r[0] == sid for r in rows):
                raise InstanceError(f"duplicate station id {sid}", lineno)
            raise InstanceError(f"station ids must appear in order; expected {expected}, got {sid}", lineno)
        if sid == 0 and d != 0:
            raise InstanceError("depot demand must be 0", lineno)
        rows.append((sid, x, y, d))
    if header is None:
        raise InstanceError("empty document")
    n, capacity = header
    if len(rows) != n + 1:
        raise InstanceError(f"expected {n + 1} station rows, found {len(rows)}")
    return _build(name, n, capacity, rows, alpha)


def parse_legacy(text: str, alpha: int = 1, name: str = "") -> Instance:
    """Best-effort loader for the classic pickup-and-delivery benchmark layout.

    Accepts either a one-line "m Q" header or m on its own line followed by Q,
    then m rows of "id x y d" or "x y d" (depot first, demand 0).
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith(("#", "//"))]
    if not lines:
        raise InstanceError("empty document")
    first = lines[0].split()
    if len(first) >= 2:
        m, capacity = int(first[0]), int(first[1])
        body = lines[1:]
    else:
        m = int(first[0])
        capacity = int(lines[1].split()[0])
        body = lines[2:]
    if len(body) < m:
        raise InstanceError(f"expected {m} station rows, found {len(body)}")
    rows = []
    for idx, ln in enumerate(body[:m]):
        parts = ln.split()
        if len(parts) == 4:
            x, y, d = Fraction(parts[1]), Fraction(parts[2]), int(float(parts[3]))
        elif len(parts) == 3:
            x, y, d = Fraction(parts[0]), Fraction(parts[1]), int(float(parts[2]))
        else:
            raise InstanceError("unrecognized station row", None)
        rows.append((idx, x, y, d))
    if rows[0][3] != 0:
        raise InstanceError("depot (first row) must have demand 0")
    return _build(name, m - 1, capacity, rows, alpha)


def serialize_instance(instance: Instance) -> str:
    """Emit the canonical format.  Requires alpha-constructed inventories."""
    a = instance.alpha
    out = [f"{instance.n} {instance.vehicle_capacity}"]
    for s in instance.stations:
        if s.id == 0:
            d = 0
        else:
            if s.demand % a or (s.initial, s.capacity) != (10 * a, 20 * a):
                raise ValueError("instance inventories do not follow the alpha construction")
            d = s.demand // a
        x = int(s.x) if float(s.x).is_integer() else s.x
        y = int(s.y) if float(s.y).is_integer() else s.y
        out.append(f"{s.id} {x} {y} {d}")
    return "\n".join(out) + "\n"


def load_instance(path: str | Path, fmt: str = "canonical", alpha: int = 1) -> Instance:
    path = Path(path)
    text = path.read_text()
    parser = {"canonical": parse_instance, "legacy": parse_legacy}.get(fmt)
    if parser is None:
        raise ValueError(f"unknown format {fmt!r}")
    return parser(text, alpha=alpha, name=path.stem)


def bundled_path(name: str) -> Path:
    """Path of a data file shipped with the package (e.g. 'n20q10D.txt')."""
    return Path(str(resources.files("sbrp").joinpath("data", name)))
