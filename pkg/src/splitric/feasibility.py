"""Dominance conditions between deployments, crossover solving and region
classification.

The three boundary conditions compare the marginal terms that separate two
scenarios:

* edge advantage (S2 beats S1 on energy): on-board compute energy per
  inference against feeder transmission energy per inference;
* link efficiency (S3 beats S2 on energy): ISL offload plus the whole GEO
  training bill against the RF dataset offload;
* continuity gain (S3 beats S1/S2 on latency): ground wait time against the
  extra overhead of training on the GEO hub.

Every verdict reports ``margin = rhs - lhs`` and ``holds`` is ``margin > 0``:
ties go to the simpler deployment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable

from .lifecycle import (
    SCENARIOS,
    Scenario,
    lifecycle_energy,
    lifecycle_latency,
)
from .model import (
    Direction,
    ModelError,
    NodeProfile,
    Role,
    Topology,
    WorkloadProfile,
    comm_energy,
    compute_energy,
    compute_latency,
)
from .params import ALIASES, resolve, set_param

BISECTION_RTOL = 1e-9
BISECTION_MAX_ITER = 200


class Objective(str, Enum):
    ENERGY = "energy"
    LATENCY = "latency"

    @property
    def units(self) -> str:
        return "J" if self is Objective.ENERGY else "s"


class Condition(str, Enum):
    EDGE_ADVANTAGE = "EdgeAdvantage"
    LINK_EFFICIENCY = "LinkEfficiency"
    CONTINUITY_GAIN = "ContinuityGain"


@dataclass(frozen=True)
class BoundaryVerdict:
    condition: Condition
    holds: bool
    lhs: float
    rhs: float
    margin: float
    units: str

    def to_dict(self) -> dict:
        return {
            "condition": self.condition.value,
            "holds": self.holds,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "units": self.units,
        }


def _verdict(condition: Condition, lhs: float, rhs: float, units: str) -> BoundaryVerdict:
    margin = rhs - lhs
    return BoundaryVerdict(condition, margin > 0, lhs, rhs, margin, units)


def edge_advantage(topo: Topology, w: WorkloadProfile) -> BoundaryVerdict:
    feeder = topo.require_feeder()
    lhs = compute_energy(w.inference.complexity, topo.leo)
    rhs = comm_energy(w.inference.input_size, feeder, Direction.UPLINK, Role.TRANSMIT)
    return _verdict(Condition.EDGE_ADVANTAGE, lhs, rhs, "J")


def link_efficiency(topo: Topology, w: WorkloadProfile) -> BoundaryVerdict:
    geo, isl = topo.require_multilayer()
    feeder = topo.require_feeder()
    data, model = w.training.dataset_size, w.model_size
    isl_offload = comm_energy(data, isl, Direction.UPLINK, Role.TRANSMIT)
    geo_bill = (
        compute_energy(w.training.complexity, geo)
        + comm_energy(data, isl, Direction.UPLINK, Role.RECEIVE)
        + comm_energy(model, isl, Direction.DOWNLINK, Role.TRANSMIT)
    )
    rhs = comm_energy(data, feeder, Direction.UPLINK, Role.TRANSMIT)
    return _verdict(Condition.LINK_EFFICIENCY, isl_offload + geo_bill, rhs, "J")


def continuity_gain(topo: Topology, w: WorkloadProfile) -> BoundaryVerdict:
    """Single-wait form of the latency condition. The S2 lifecycle carries
    twice the wait; :func:`crossover` on ``wait_time`` uses the full
    lifecycle instead."""
    geo, isl = topo.require_multilayer()
    feeder = topo.require_feeder()
    omega = w.training.complexity
    geo_overhead = isl.rtt + compute_latency(omega, geo)
    ground_overhead = feeder.rtt + compute_latency(omega, topo.ground)
    return _verdict(Condition.CONTINUITY_GAIN, geo_overhead - ground_overhead, feeder.wait_time, "s")


BOUNDARIES: dict[str, Callable[[Topology, WorkloadProfile], BoundaryVerdict]] = {
    "edge": edge_advantage,
    "link": link_efficiency,
    "continuity": continuity_gain,
}


# Closed-form loci of the edge-advantage equality.


def breakeven_input_size(topo: Topology, w: WorkloadProfile) -> float:
    """Input size (bits) where streaming one input costs as much as one
    on-board inference."""
    feeder = topo.require_feeder()
    return w.inference.complexity * topo.leo.energy_per_flop * feeder.uplink_rate / feeder.tx_power


def complexity_ceiling(topo: Topology, w: WorkloadProfile) -> float:
    """Inference FLOPs above which on-board compute costs more energy than
    streaming the input to the ground."""
    feeder = topo.require_feeder()
    return feeder.tx_power * w.inference.input_size / (feeder.uplink_rate * topo.leo.energy_per_flop)


def rate_for_ceiling(topo: Topology, w: WorkloadProfile, ceiling: float) -> float:
    """Feeder uplink rate (bit/s) at which the complexity ceiling equals
    *ceiling* FLOP."""
    feeder = topo.require_feeder()
    return feeder.tx_power * w.inference.input_size / (ceiling * topo.leo.energy_per_flop)


# ---------------------------------------------------------------------------
# crossovers

# affine transform of each axis, None = solve by bisection
AXIS_TRANSFORM: dict[str, str | None] = {
    "input_size": "identity",
    "complexity": "identity",
    "wait_time": "identity",
    "uplink_rate": "reciprocal",
    "longevity": None,
}


@dataclass(frozen=True)
class CrossoverResult:
    axis: str
    objective: Objective
    pair: tuple[Scenario, Scenario]
    per_op: bool
    value: float | None
    method: str
    bracketed: bool
    residual: float | None
    tolerance: float
    iterations: int = 0
    sign: int = 0  # sign of (first - second) when not bracketed

    @property
    def status(self) -> str:
        return "crossover" if self.bracketed else "no_crossover"

    def to_dict(self) -> dict:
        return {
            "axis": self.axis,
            "path": resolve(self.axis),
            "objective": self.objective.value,
            "pair": [s.value for s in self.pair],
            "per_op": self.per_op,
            "status": self.status,
            "value": self.value,
            "method": self.method,
            "bracketed": self.bracketed,
            "residual": self.residual,
            "residual_units": self.objective.units,
            "tolerance": self.tolerance,
            "iterations": self.iterations,
            "sign": self.sign,
        }


def per_op_cost(scenario: Scenario, objective: Objective, topo: Topology, w: WorkloadProfile) -> float:
    """Cost of one inference event, the large-longevity limit of the
    amortized lifecycle cost."""
    objective = Objective(objective)
    inf = w.inference
    if scenario is Scenario.S1:
        feeder = topo.require_feeder()
        if objective is Objective.ENERGY:
            return comm_energy(inf.input_size, feeder, Direction.UPLINK, Role.TRANSMIT)
        return feeder.rtt + inf.input_size / feeder.uplink_rate
    if scenario is Scenario.S3:
        topo.require_multilayer()
    if objective is Objective.ENERGY:
        return compute_energy(inf.complexity, topo.leo)
    return compute_latency(inf.complexity, topo.leo)


def scenario_total(
    scenario: Scenario,
    objective: Objective,
    topo: Topology,
    w: WorkloadProfile,
    n_inf: float | None = None,
) -> float:
    objective = Objective(objective)
    if objective is Objective.ENERGY:
        return lifecycle_energy(scenario, topo, w, n_inf=n_inf).total
    return lifecycle_latency(scenario, topo, w, n_inf=n_inf).total


def cost_difference(
    axis: str,
    objective: Objective,
    pair: tuple[Scenario, Scenario],
    topo: Topology,
    w: WorkloadProfile,
    per_op: bool = False,
) -> Callable[[float], float]:
    """``x -> cost(pair[0]) - cost(pair[1])`` with the *axis* parameter set
    to ``x`` and everything else fixed."""
    objective = Objective(objective)
    path = resolve(axis)
    first, second = pair
    if path == ALIASES["longevity"]:
        if per_op:
            raise ValueError("per-operation costs do not depend on longevity")

        def diff(x: float) -> float:
            return scenario_total(first, objective, topo, w, n_inf=x) - scenario_total(
                second, objective, topo, w, n_inf=x
            )

        return diff

    def diff(x: float) -> float:
        t, ww = set_param(topo, w, path, x)
        if per_op:
            return per_op_cost(first, objective, t, ww) - per_op_cost(second, objective, t, ww)
        return scenario_total(first, objective, t, ww) - scenario_total(second, objective, t, ww)

    return diff


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def _axis_key(axis: str) -> str:
    try:
        path = resolve(axis)
    except KeyError:
        path = None
    for key, target in ALIASES.items():
        if target == path:
            return key
    raise ValueError(f"{axis!r} is not a crossover axis (one of {', '.join(AXIS_TRANSFORM)})")


def crossover(
    axis: str,
    objective: Objective | str,
    pair: tuple[Scenario, Scenario],
    topo: Topology,
    w: WorkloadProfile,
    search_range: tuple[float, float],
    per_op: bool = False,
    method: str | None = None,
) -> CrossoverResult:
    """Parameter value on *axis* where the two scenarios cost the same.

    Axes whose cost difference is affine (input size, complexity, wait time)
    or affine in the reciprocal (uplink rate) are solved in closed form from
    the affine coefficients; longevity is bisected. *method* forces one or
    the other.
    """
    objective = Objective(objective)
    key = _axis_key(axis)
    lo, hi = (float(v) for v in search_range)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise ValueError(f"invalid search range [{lo!r}, {hi!r}]")
    if lo < 0:
        raise ValueError("search range must be non-negative")
    transform = AXIS_TRANSFORM[key]
    if method is None:
        method = "bisection" if transform is None else "closed_form"
    if method == "closed_form" and transform is None:
        raise ValueError(f"no closed form along {key}")
    if method not in ("closed_form", "bisection"):
        raise ValueError(f"unknown method {method!r}")
    if transform == "reciprocal" and lo == 0:
        raise ValueError(f"{key} range must start above zero")

    f = cost_difference(key, objective, pair, topo, w, per_op=per_op)
    f_lo, f_hi = f(lo), f(hi)
    if not (math.isfinite(f_lo) and math.isfinite(f_hi)):
        raise ArithmeticError(f"non-finite cost difference on [{lo!r}, {hi!r}]")
    common = dict(axis=key, objective=objective, pair=tuple(pair), per_op=per_op, tolerance=BISECTION_RTOL)

    if f_lo == 0:
        return CrossoverResult(value=lo, method=method, bracketed=True, residual=0.0, **common)
    if f_hi == 0:
        return CrossoverResult(value=hi, method=method, bracketed=True, residual=0.0, **common)
    if _sign(f_lo) == _sign(f_hi):
        return CrossoverResult(
            value=None, method=method, bracketed=False, residual=None, sign=_sign(f_lo), **common
        )

    if method == "closed_form":
        if transform == "identity":
            u_lo, u_hi = lo, hi
        else:
            u_lo, u_hi = 1.0 / lo, 1.0 / hi
        slope = (f_hi - f_lo) / (u_hi - u_lo)
        u = u_lo - f_lo / slope
        x = u if transform == "identity" else 1.0 / u
        x = min(max(x, lo), hi)
        return CrossoverResult(value=x, method=method, bracketed=True, residual=f(x), **common)

    a, b, fa = lo, hi, f_lo
    it = 0
    while it < BISECTION_MAX_ITER and (b - a) > BISECTION_RTOL * max(abs(a), abs(b)):
        it += 1
        m = 0.5 * (a + b)
        fm = f(m)
        if not math.isfinite(fm):
            raise ArithmeticError(f"non-finite cost difference at {m!r}")
        if fm == 0:
            a = b = m
            break
        if _sign(fm) == _sign(fa):
            a, fa = m, fm
        else:
            b = m
    x = 0.5 * (a + b)
    return CrossoverResult(value=x, method=method, bracketed=True, residual=f(x), iterations=it, **common)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class RegionLabel:
    """Winning scenario at one point. ``winner`` is None only for latency-map
    cells where no scenario meets the deadline."""

    objective: Objective
    winner: Scenario | None
    totals: dict[Scenario, float]
    margins: dict[Scenario, float]
    skipped: tuple[Scenario, ...] = ()

    @property
    def name(self) -> str:
        return self.winner.short if self.winner is not None else "infeasible"

    def to_dict(self) -> dict:
        return {
            "objective": self.objective.value,
            "winner": self.winner.value if self.winner is not None else None,
            "totals": {s.value: v for s, v in self.totals.items()},
            "margins": {s.value: v for s, v in self.margins.items()},
            "skipped": [s.value for s in self.skipped],
            "units": self.objective.units,
        }


def pick_winner(totals: dict[Scenario, float]) -> Scenario:
    # ties go to the simpler deployment (S1 < S2 < S3)
    return min(totals, key=lambda s: (totals[s], SCENARIOS.index(s)))


def classify(
    topo: Topology,
    w: WorkloadProfile,
    objective: Objective | str,
    scenarios: Iterable[Scenario] = SCENARIOS,
) -> RegionLabel:
    objective = Objective(objective)
    totals: dict[Scenario, float] = {}
    skipped = []
    for s in sorted(set(scenarios), key=SCENARIOS.index):
        try:
            totals[s] = scenario_total(s, objective, topo, w)
        except ModelError:
            skipped.append(s)
    if not totals:
        raise ModelError("no scenario can be evaluated on this topology")
    winner = pick_winner(totals)
    margins = {s: v - totals[winner] for s, v in totals.items() if s is not winner}
    return RegionLabel(objective, winner, totals, margins, tuple(skipped))


@dataclass(frozen=True)
class PowerVerdict:
    node: str
    average_power: float
    power_budget: float | None
    within_budget: bool

    def to_dict(self) -> dict:
        return {
            "node": self.node,
            "average_power": self.average_power,
            "power_budget": self.power_budget,
            "within_budget": self.within_budget,
            "units": "W",
        }


def power_budget_check(node: NodeProfile, w: WorkloadProfile, inference_rate: float) -> PowerVerdict:
    """Duty-cycled average compute power for *inference_rate* inferences per
    second against the node's power budget."""
    if not inference_rate >= 0:
        raise ValueError("inference rate must be >= 0")
    power = inference_rate * compute_energy(w.inference.complexity, node)
    ok = node.power_budget is None or power <= node.power_budget
    return PowerVerdict(node.id, power, node.power_budget, ok)
