"""Self-contained reference checks behind the ``validate`` command.

Each check reproduces one reference result or invariant from the default
deployment and reports pass/fail with the numbers it saw. Nothing here reads
files or the network; the whole run takes a few seconds.
"""

from __future__ import annotations

import io
import math
import time
from dataclasses import dataclass, replace

import numpy as np

from .feasibility import (
    Objective,
    classify,
    complexity_ceiling,
    continuity_gain,
    crossover,
    rate_for_ceiling,
)
from .lifecycle import (
    SCENARIOS,
    Scenario,
    amortized_energy_per_inference,
    control_loop_latency,
    lifecycle_energy,
    lifecycle_latency,
)
from .model import Topology, WorkloadProfile, reference_topology, reference_workload
from .params import set_param
from .sweep import AxisSpec, latency_region, oracle_verify, run_sweep

KB = 8e3  # bits per decimal kilobyte
MB = 8e6
GFLOP = 1e9


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.name}: {self.detail}"


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def _with(topo: Topology, w: WorkloadProfile, **values) -> tuple[Topology, WorkloadProfile]:
    for path, v in values.items():
        topo, w = set_param(topo, w, path.replace("__", "."), v)
    return topo, w


def check_data_volume_crossover() -> CheckResult:
    topo, w = reference_topology(), reference_workload()
    args = ("input_size", Objective.ENERGY, (Scenario.S1, Scenario.S2), topo, w, (10 * KB, 50_000 * KB))
    best = math.inf
    for _ in range(5):
        t0 = time.perf_counter()
        res = crossover(*args, per_op=True)
        best = min(best, time.perf_counter() - t0)
    kb = res.value / KB
    ok = res.bracketed and _rel(kb, 85.0) <= 0.05 and abs(kb - 250 / 3) < 1e-6 and best < 1e-3
    return CheckResult(
        1, "data-volume crossover", ok, f"{kb:.4f} kB vs 85 kB ({_rel(kb, 85.0):.2%} off), solved in {best * 1e6:.0f} us"
    )


def check_energy_reduction() -> CheckResult:
    topo, w = _with(reference_topology(), reference_workload(), workload__inference__input_size=10 * MB)
    j1 = lifecycle_energy(Scenario.S1, topo, w).total
    j2 = lifecycle_energy(Scenario.S2, topo, w).total
    reduction = 1 - j2 / j1
    ok = _rel(j1, 240300.0) <= 1e-9 and _rel(j2, 2300.5) <= 1e-9 and reduction > 0.90
    return CheckResult(2, "energy reduction at 10 MB", ok, f"S1 {j1:.6g} J, S2 {j2:.6g} J, reduction {reduction:.2%}")


def check_continuity_gain() -> CheckResult:
    topo, w = reference_topology(), reference_workload()
    v = continuity_gain(topo, w)
    waits = np.linspace(60.0, 3600.0, 100)
    losers = []
    for t_wait in waits:
        t, ww = set_param(topo, w, "links.feeder.wait_time", float(t_wait))
        if classify(t, ww, Objective.LATENCY).winner is not Scenario.S3:
            losers.append(float(t_wait))
    ok = _rel(v.lhs, 0.82) <= 1e-9 and not losers
    return CheckResult(
        3,
        "continuity-gain threshold",
        ok,
        f"GEO-minus-ground overhead {v.lhs:.6g} s; S3 latency winner at {100 - len(losers)}/100 waits in [60 s, 60 min]",
    )


def check_s3_learning_loop() -> CheckResult:
    b = lifecycle_latency(Scenario.S3, reference_topology(), reference_workload())
    loop = b.wait + b.propagation + b.data_upload + b.training_compute
    ok = _rel(loop, 2.0) <= 0.10 and b.wait == 0.0 and _rel(loop, 1.99) <= 1e-9
    return CheckResult(
        4, "S3 learning-loop latency", ok, f"{loop:.6g} s (wait {b.wait} s), calibrated training load 1.5e14 FLOP"
    )


def check_complexity_ceiling() -> CheckResult:
    topo, w = reference_topology(), reference_workload()
    w5 = replace(w, inference=replace(w.inference, input_size=5 * MB))
    ceiling = complexity_ceiling(topo, w5)
    rate = rate_for_ceiling(topo, w5, 250 * GFLOP)
    slow, _ = set_param(topo, w5, "links.feeder.uplink_rate", 120e6)
    slow_ceiling = complexity_ceiling(slow, w5)
    ok = _rel(ceiling, 60 * GFLOP) <= 1e-9 and _rel(slow_ceiling, 250 * GFLOP) <= 1e-9 and _rel(rate, 120e6) <= 1e-9
    return CheckResult(
        5,
        "complexity ceiling",
        ok,
        f"{ceiling / GFLOP:.6g} GFLOP at 500 Mbit/s; 250 GFLOP needs {rate / 1e6:.6g} Mbit/s "
        f"({slow_ceiling / GFLOP:.6g} GFLOP at 120 Mbit/s)",
    )


def oracle_cases() -> list[dict]:
    """Crossover problems covering every solver axis, each with a range that
    brackets a single crossing (plus one range with none)."""
    topo, w = reference_topology(), reference_workload()
    s1, s2, s3 = SCENARIOS
    e, lat = Objective.ENERGY, Objective.LATENCY
    heavy = _with(topo, w, workload__training__complexity=1e16)
    return [
        dict(axis=AxisSpec("input_size", 10 * KB, 50_000 * KB, 200, "logarithmic"), objective=e, pair=(s1, s2), per_op=True, model=(topo, w)),
        dict(axis=AxisSpec("input_size", 10 * KB, 50_000 * KB, 200, "logarithmic"), objective=e, pair=(s1, s2), per_op=False, model=(topo, w)),
        dict(axis=AxisSpec("complexity", 0.1 * GFLOP, 500 * GFLOP, 200, "logarithmic"), objective=e, pair=(s1, s2), per_op=False, model=(topo, w)),
        dict(axis=AxisSpec("longevity", 1.0, 1e6, 200, "logarithmic"), objective=e, pair=(s1, s3), per_op=False, model=(topo, w)),
        dict(axis=AxisSpec("wait_time", 0.0, 3600.0, 200, "linear"), objective=lat, pair=(s1, s2), per_op=False,
             model=_with(topo, w, workload__inference__input_size=10 * KB)),
        dict(axis=AxisSpec("wait_time", 0.0, 3600.0, 200, "linear"), objective=lat, pair=(s2, s3), per_op=False, model=heavy),
        dict(axis=AxisSpec("wait_time", 0.0, 3600.0, 200, "linear"), objective=lat, pair=(s2, s3), per_op=False, model=(topo, w)),
        dict(axis=AxisSpec("uplink_rate", 50e6, 1e9, 200, "logarithmic"), objective=e, pair=(s1, s2), per_op=False,
             model=_with(topo, w, workload__inference__input_size=100 * KB)),
    ]


def check_oracle_equivalence() -> CheckResult:
    t0 = time.perf_counter()
    failures = []
    n = 0
    for case in oracle_cases():
        topo, w = case["model"]
        axis = case["axis"]
        res = crossover(axis.parameter, case["objective"], case["pair"], topo, w, (axis.lo, axis.hi), per_op=case["per_op"])
        report = oracle_verify(res, axis, topo, w)
        n += 1
        if not report.passed:
            failures.append(f"{axis.parameter}/{case['pair'][0].short}:{case['pair'][1].short}: {report.message}")
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 5.0
    detail = f"{n - len(failures)}/{n} solver results confirmed by 10^4-point scans in {elapsed:.2f} s"
    if failures:
        detail += "; " + "; ".join(failures)
    return CheckResult(6, "oracle equivalence", ok, detail)


def random_model(rng: np.random.Generator) -> tuple[Topology, WorkloadProfile]:
    """One draw from the swept ranges of the reference evaluation. Link and
    node values stay at their reference settings."""
    topo, w = reference_topology(), reference_workload()

    def logu(lo, hi):
        return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))

    return _with(
        topo,
        w,
        workload__inference__input_size=logu(10 * KB, 50_000 * KB),
        workload__inference__complexity=logu(0.1 * GFLOP, 500 * GFLOP),
        workload__training__complexity=logu(1e12, 1e16),
        workload__longevity=int(logu(1, 1e6)),
        links__feeder__wait_time=float(rng.uniform(0, 3600)),
    )


def invariant_violations(topo: Topology, w: WorkloadProfile, rng: np.random.Generator) -> list[str]:
    bad = []
    n = w.longevity
    feeder = topo.feeder
    # decomposition, bit for bit
    for s in SCENARIOS:
        for b in (lifecycle_energy(s, topo, w), lifecycle_latency(s, topo, w)):
            comps = b.components().values()
            if b.total != sum(comps) or min(comps) < 0:
                bad.append(f"decomposition {s.short}")
    # S2/S3 energy ignores input size
    other = float(math.exp(rng.uniform(math.log(10 * KB), math.log(50_000 * KB))))
    t2, w2 = set_param(topo, w, "workload.inference.input_size", other)
    for s in (Scenario.S2, Scenario.S3):
        if lifecycle_energy(s, topo, w).total != lifecycle_energy(s, t2, w2).total:
            bad.append(f"input-size independence {s.short}")
    # monotonicity
    j1 = lifecycle_energy(Scenario.S1, topo, w).total
    j2 = lifecycle_energy(Scenario.S2, topo, w).total
    k = 1.0 + float(rng.uniform(0.01, 1.0))
    up = {
        "workload.inference.input_size": w.inference.input_size * k,
        "workload.longevity": n + 1 + int(rng.integers(0, n + 1)),
    }
    for path, v in up.items():
        t, ww = set_param(topo, w, path, v)
        if not lifecycle_energy(Scenario.S1, t, ww).total > j1:
            bad.append(f"S1 energy not increasing in {path}")
    t, ww = set_param(topo, w, "links.feeder.uplink_rate", feeder.uplink_rate / k)
    if not lifecycle_energy(Scenario.S1, t, ww).total > j1:
        bad.append("S1 energy not increasing in 1/uplink_rate")
    for path, v in (("workload.inference.complexity", w.inference.complexity * k), ("workload.longevity", up["workload.longevity"])):
        t, ww = set_param(topo, w, path, v)
        if not lifecycle_energy(Scenario.S2, t, ww).total > j2:
            bad.append(f"S2 energy not increasing in {path}")
    # latency gap identity
    gap = lifecycle_latency(Scenario.S2, topo, w).total - lifecycle_latency(Scenario.S1, topo, w).total
    expected = feeder.wait_time + n * (
        w.inference.complexity / topo.leo.compute_capacity - feeder.rtt - w.inference.input_size / feeder.uplink_rate
    )
    scale = lifecycle_latency(Scenario.S1, topo, w).total + lifecycle_latency(Scenario.S2, topo, w).total
    if abs(gap - expected) > 1e-12 * scale:
        bad.append("S2-S1 latency gap identity")
    # sensitivity to 1/R_ul: affine slope from two rates
    r1, r2 = feeder.uplink_rate, feeder.uplink_rate / k
    ta, wa = set_param(topo, w, "links.feeder.uplink_rate", r2)
    du = 1 / r2 - 1 / r1
    slope1 = (lifecycle_energy(Scenario.S1, ta, wa).total - j1) / du
    slope2 = (lifecycle_energy(Scenario.S2, ta, wa).total - j2) / du
    want1 = feeder.tx_power * (w.training.dataset_size + n * w.inference.input_size)
    want2 = feeder.tx_power * w.training.dataset_size
    if _rel(slope1, want1) > 1e-6 or _rel(slope2, want2) > 1e-6 or not slope1 > slope2:
        bad.append("rate-degradation sensitivity")
    # amortization limit
    lim = amortized_energy_per_inference(Scenario.S2, topo, w, n_inf=1e9)
    if _rel(lim, w.inference.complexity * topo.leo.energy_per_flop) > 1e-3:
        bad.append("amortization limit")
    # latency-map monotonicity
    deadline = float(math.exp(rng.uniform(0, math.log(1e5))))
    label, _ = latency_region(topo, w, deadline)
    t_less, w_less = set_param(topo, w, "links.feeder.wait_time", feeder.wait_time * float(rng.uniform(0, 1)))
    if label.winner is Scenario.S2 and latency_region(t_less, w_less, deadline)[0].winner is not Scenario.S2:
        bad.append("latency map: S2 region not closed under smaller wait")
    if label.winner is None and latency_region(topo, w, deadline * float(rng.uniform(0, 1)))[0].winner is not None:
        bad.append("latency map: infeasible region not closed under smaller deadline")
    return bad


def sweep_bytes(topo: Topology, w: WorkloadProfile) -> str:
    buf = io.StringIO()
    run_sweep(AxisSpec("input_size", 10 * KB, 50_000 * KB, 5, "logarithmic"), topo, w).write_csv(buf)
    return buf.getvalue()


def check_invariants(draws: int = 1000, seed: int = 20260115) -> CheckResult:
    rng = np.random.default_rng(seed)
    failures: dict[str, int] = {}
    for i in range(draws):
        topo, w = random_model(rng)
        for msg in invariant_violations(topo, w, rng):
            failures[msg] = failures.get(msg, 0) + 1
        if i % 50 == 0 and sweep_bytes(topo, w) != sweep_bytes(topo, w):
            failures["sweep determinism"] = failures.get("sweep determinism", 0) + 1
    ok = not failures
    detail = f"{draws} random draws" + ("" if ok else ": " + ", ".join(f"{k} x{v}" for k, v in failures.items()))
    return CheckResult(7, "invariant suite", ok, detail)


def check_control_loop() -> CheckResult:
    topo, w = reference_topology(), reference_workload()
    slow = []
    for size in [10 * KB] + list(np.geomspace(10 * KB, 50_000 * KB, 200)):
        t, ww = set_param(topo, w, "workload.inference.input_size", float(size))
        if not control_loop_latency(Scenario.S1, t, ww).latency > 0.010:
            slow.append(size)
    fast = []
    for omega in list(np.geomspace(0.1 * GFLOP, 100 * GFLOP, 200)) + [100 * GFLOP]:
        t, ww = set_param(topo, w, "workload.inference.complexity", float(omega))
        for s in (Scenario.S2, Scenario.S3):
            r = control_loop_latency(s, t, ww)
            if not (r.latency <= 0.010 and r.deadline_met):
                fast.append((s, omega))
    worst = control_loop_latency(Scenario.S2, *set_param(topo, w, "workload.inference.complexity", 100 * GFLOP))
    ok = not slow and not fast
    return CheckResult(
        8,
        "control-loop feasibility at 10 ms",
        ok,
        f"S1 misses 10 ms for all inputs >= 10 kB ({len(slow)} exceptions); "
        f"on-board loop {worst.latency * 1e3:.6g} ms at 100 GFLOP ({len(fast)} exceptions)",
    )


CHECKS = (
    check_data_volume_crossover,
    check_energy_reduction,
    check_continuity_gain,
    check_s3_learning_loop,
    check_complexity_ceiling,
    check_oracle_equivalence,
    check_invariants,
    check_control_loop,
)


def derived_notes() -> list[str]:
    """Reference quantities that are reported rather than gated."""
    topo, w = reference_topology(), reference_workload()
    n_star = crossover("longevity", Objective.ENERGY, (Scenario.S1, Scenario.S2), topo, w, (1e-6, 1e7))
    rate = rate_for_ceiling(topo, w, 250 * GFLOP)
    return [
        f"complexity ceiling at 5 MB / 500 Mbit/s: {complexity_ceiling(topo, w) / GFLOP:.6g} GFLOP; "
        f"a 250 GFLOP ceiling needs a {rate / 1e6:.6g} Mbit/s feeder uplink",
        f"S1/S2 energy break-even longevity at 5 MB: {n_star.value:.6g} inference events",
    ]


def run_all() -> list[CheckResult]:
    return [check() for check in CHECKS]
