"""Parameter sweeps, 2-D feasibility maps and the brute-force crossover oracle.

Rows and cells are always emitted in a fixed order (axis value ascending;
maps row-major with y as the outer loop) so the same inputs produce
byte-identical CSV.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from .feasibility import (
    CrossoverResult,
    Objective,
    RegionLabel,
    classify,
    cost_difference,
)
from .lifecycle import SCENARIOS, Scenario, lifecycle_latency
from .model import ModelError, Topology, WorkloadProfile
from .params import column_name, resolve, set_param

log = logging.getLogger(__name__)

ORACLE_POINTS = 10_000
UPDATE_DEADLINE = "update_deadline"


@dataclass(frozen=True)
class AxisSpec:
    parameter: str
    lo: float
    hi: float
    points: int = 50
    spacing: str = "linear"

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"axis {self.parameter}: lo must be < hi")
        if self.points < 2:
            raise ValueError(f"axis {self.parameter}: need at least 2 points")
        if self.spacing not in ("linear", "logarithmic"):
            raise ValueError(f"axis {self.parameter}: spacing must be linear or logarithmic")
        if self.spacing == "logarithmic" and self.lo <= 0:
            raise ValueError(f"axis {self.parameter}: logarithmic spacing needs lo > 0")

    def grid(self, points: int | None = None) -> list[float]:
        n = self.points if points is None else points
        if self.spacing == "logarithmic":
            g = np.geomspace(self.lo, self.hi, n)
        else:
            g = np.linspace(self.lo, self.hi, n)
        g[0], g[-1] = self.lo, self.hi
        return [float(v) for v in g]

    @property
    def column(self) -> str:
        if self.parameter == UPDATE_DEADLINE:
            return "update_deadline_s"
        return column_name(self.parameter)


@dataclass(frozen=True)
class UrgencySpec:
    """Maximum tolerable learning-cycle latency, the reciprocal of the
    required model update frequency."""

    update_deadline: float

    def __post_init__(self):
        if not self.update_deadline > 0:
            raise ValueError("update_deadline must be > 0")


# Default ranges: the swept ranges of the reference evaluation.
def default_input_axis(points: int = 60) -> AxisSpec:
    return AxisSpec("workload.inference.input_size", 8e4, 4e8, points, "logarithmic")


def default_complexity_axis(points: int = 60) -> AxisSpec:
    return AxisSpec("workload.inference.complexity", 1e8, 5e11, points, "logarithmic")


def default_wait_axis(points: int = 61) -> AxisSpec:
    return AxisSpec("links.feeder.wait_time", 0.0, 3600.0, points, "linear")


def default_deadline_axis(points: int = 50) -> AxisSpec:
    return AxisSpec(UPDATE_DEADLINE, 1.0, 1e4, points, "logarithmic")


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    energy: dict[Scenario, float]
    latency: dict[Scenario, float]
    winner_energy: Scenario
    winner_latency: Scenario


@dataclass
class Sweep:
    axis: AxisSpec
    scenarios: tuple[Scenario, ...]
    rows: list[SweepRow] = field(default_factory=list)
    skipped: list[tuple[float, str]] = field(default_factory=list)

    def write_csv(self, fh: TextIO) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        header = [self.axis.column]
        header += [f"{s.short}_energy_J" for s in self.scenarios]
        header += [f"{s.short}_latency_s" for s in self.scenarios]
        header += ["winner_energy", "winner_latency"]
        writer.writerow(header)
        for r in self.rows:
            writer.writerow(
                [_num(r.axis_value)]
                + [_num(r.energy[s]) for s in self.scenarios]
                + [_num(r.latency[s]) for s in self.scenarios]
                + [r.winner_energy.short, r.winner_latency.short]
            )


def _num(v: float) -> str:
    return f"{v:.16e}"


def _ordered(scenarios: Iterable[Scenario]) -> tuple[Scenario, ...]:
    chosen = tuple(s for s in SCENARIOS if s in set(scenarios))
    if not chosen:
        raise ValueError("empty scenario set")
    return chosen


def _check_evaluable(topo: Topology, scenarios: Sequence[Scenario]) -> None:
    if Scenario.S3 in scenarios:
        topo.require_multilayer()
    if Scenario.S1 in scenarios or Scenario.S2 in scenarios:
        topo.require_feeder()


def run_sweep(
    axis: AxisSpec,
    topo: Topology,
    w: WorkloadProfile,
    scenarios: Iterable[Scenario] = SCENARIOS,
) -> Sweep:
    """Evaluate every scenario along *axis*, all other parameters fixed.

    Grid values that break a hard profile invariant are skipped and listed
    in ``Sweep.skipped``.
    """
    path = resolve(axis.parameter)
    chosen = _ordered(scenarios)
    _check_evaluable(topo, chosen)
    sweep = Sweep(axis, chosen)
    for x in axis.grid():
        try:
            t, ww = set_param(topo, w, path, x)
        except ModelError as exc:
            log.warning("skipping %s = %r: %s", path, x, exc)
            sweep.skipped.append((x, str(exc)))
            continue
        e = classify(t, ww, Objective.ENERGY, chosen)
        lat = classify(t, ww, Objective.LATENCY, chosen)
        value = float(ww.longevity) if path == "workload.longevity" else x
        sweep.rows.append(SweepRow(value, e.totals, lat.totals, e.winner, lat.winner))
    return sweep


@dataclass(frozen=True)
class MapCell:
    x: float
    y: float
    label: RegionLabel
    slack: dict[Scenario, float] = field(default_factory=dict)


@dataclass
class FeasibilityMap:
    kind: str
    x_column: str
    y_column: str
    x_values: list[float]
    y_values: list[float]
    scenarios: tuple[Scenario, ...]
    cells: list[MapCell] = field(default_factory=list)
    skipped: list[tuple[float, float, str]] = field(default_factory=list)

    def label_grid(self) -> list[list[str]]:
        """Region names, one list per y value (complete grids only)."""
        nx = len(self.x_values)
        names = [c.label.name for c in self.cells]
        return [names[i : i + nx] for i in range(0, len(names), nx)]

    def write_csv(self, fh: TextIO) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        unit = "J" if self.kind == "energy" else "s"
        header = [self.x_column, self.y_column, "region"]
        header += [f"{s.short}_{self.kind}_{unit}" for s in self.scenarios]
        writer.writerow(header)
        for c in self.cells:
            writer.writerow(
                [_num(c.x), _num(c.y), c.label.name] + [_num(c.label.totals[s]) for s in self.scenarios]
            )


def run_energy_map(
    topo: Topology,
    w: WorkloadProfile,
    x: AxisSpec | None = None,
    y: AxisSpec | None = None,
    include_s3: bool = False,
) -> FeasibilityMap:
    """Energy winner over a (data volume, complexity) grid, S1 vs S2 unless
    *include_s3*."""
    x = x or default_input_axis()
    y = y or default_complexity_axis()
    scenarios = _ordered([Scenario.S1, Scenario.S2] + ([Scenario.S3] if include_s3 else []))
    _check_evaluable(topo, scenarios)
    xpath, ypath = resolve(x.parameter), resolve(y.parameter)
    fmap = FeasibilityMap("energy", x.column, y.column, x.grid(), y.grid(), scenarios)
    for yv in fmap.y_values:
        for xv in fmap.x_values:
            try:
                t, ww = set_param(topo, w, ypath, yv)
                t, ww = set_param(t, ww, xpath, xv)
            except ModelError as exc:
                fmap.skipped.append((xv, yv, str(exc)))
                continue
            fmap.cells.append(MapCell(xv, yv, classify(t, ww, Objective.ENERGY, scenarios)))
    return fmap


def latency_region(
    topo: Topology, w: WorkloadProfile, deadline: float, learning_only: bool = False
) -> tuple[RegionLabel, dict[Scenario, float]]:
    """S2 if its lifecycle meets *deadline*, else S3 if it does, else
    infeasible. Returns the label and each scenario's slack (deadline minus
    latency)."""
    totals = {}
    for s in (Scenario.S2, Scenario.S3):
        b = lifecycle_latency(s, topo, w)
        totals[s] = b.learning_total if learning_only else b.total
    winner = next((s for s in (Scenario.S2, Scenario.S3) if totals[s] <= deadline), None)
    slack = {s: deadline - v for s, v in totals.items()}
    return RegionLabel(Objective.LATENCY, winner, totals, {}), slack


def run_latency_map(
    topo: Topology,
    w: WorkloadProfile,
    x: AxisSpec | None = None,
    y: AxisSpec | Sequence[UrgencySpec] | None = None,
    learning_only: bool = False,
) -> FeasibilityMap:
    """Latency admissibility over a (wait time, update deadline) grid."""
    x = x or default_wait_axis()
    if y is None:
        y = default_deadline_axis()
    if isinstance(y, AxisSpec):
        if y.parameter != UPDATE_DEADLINE:
            raise ValueError(f"latency map y axis must be {UPDATE_DEADLINE!r}")
        deadlines = [UrgencySpec(d).update_deadline for d in y.grid()]
    else:
        deadlines = sorted(u.update_deadline for u in y)
        if not deadlines:
            raise ValueError("need at least one update deadline")
    _check_evaluable(topo, (Scenario.S2, Scenario.S3))
    xpath = resolve(x.parameter)
    fmap = FeasibilityMap(
        "latency", x.column, "update_deadline_s", x.grid(), deadlines, (Scenario.S2, Scenario.S3)
    )
    for d in fmap.y_values:
        for xv in fmap.x_values:
            try:
                t, ww = set_param(topo, w, xpath, xv)
            except ModelError as exc:
                fmap.skipped.append((xv, d, str(exc)))
                continue
            label, slack = latency_region(t, ww, d, learning_only)
            fmap.cells.append(MapCell(xv, d, label, slack))
    return fmap


# ---------------------------------------------------------------------------
# brute-force oracle


@dataclass(frozen=True)
class OracleReport:
    passed: bool
    sign_changes: int
    grid_points: int
    grid_value: float | None
    grid_step: float | None
    deviation: float | None
    message: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def oracle_verify(
    cross: CrossoverResult,
    axis: AxisSpec,
    topo: Topology,
    w: WorkloadProfile,
    points: int = ORACLE_POINTS,
) -> OracleReport:
    """Scan the cost difference on a dense grid and check it against *cross*.

    A bracketed crossover passes when the scan finds exactly one sign change
    and the solver value lies within one grid step of it; an unbracketed
    result passes when the scan finds none. Failures are reported, not
    raised.
    """
    f = cost_difference(cross.axis, cross.objective, cross.pair, topo, w, per_op=cross.per_op)
    grid = axis.grid(max(points, axis.points))
    signs = []
    for x in grid:
        d = f(x)
        signs.append((x, (d > 0) - (d < 0)))
    nonzero = [(x, s) for x, s in signs if s != 0]
    changes = []
    for (x0, s0), (x1, s1) in zip(nonzero, nonzero[1:]):
        if s0 != s1:
            changes.append((x0, x1))
    n = len(grid)
    if not cross.bracketed:
        ok = not changes
        msg = "no sign change, as expected" if ok else f"solver found no crossover but scan found {len(changes)}"
        return OracleReport(ok, len(changes), n, None, None, None, msg)
    if len(changes) != 1:
        return OracleReport(False, len(changes), n, None, None, None, f"expected 1 sign change, found {len(changes)}")
    x0, x1 = changes[0]
    step = x1 - x0
    mid = 0.5 * (x0 + x1)
    dev = abs(mid - cross.value)
    ok = dev <= step
    msg = f"grid crossing in [{x0:.9g}, {x1:.9g}], solver {cross.value:.9g}"
    return OracleReport(ok, 1, n, mid, step, dev, msg)
