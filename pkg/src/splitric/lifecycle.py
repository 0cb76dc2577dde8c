"""Lifecycle energy and latency for the three deployments.

A lifecycle is one training-data offload, one model update and ``longevity``
inference events. Scenarios:

* ``S1_GroundCentric`` - bent pipe; training and inference on the ground, every
  inference streams its raw input over the feeder uplink.
* ``S2_SplitRIC`` - inference on the LEO node, training on the ground; the
  learning loop waits for a ground pass on the way up and again on the way
  down.
* ``S3_MultiLayer`` - inference on the LEO node, training on a GEO hub reached
  over an always-available optical ISL.

Energy counts what the space segment spends (ground compute is grid powered).
S1 and S2 bill no compute for the ground; S3 bills both LEO and GEO.

All functions accept an optional ``n_inf`` that replaces ``w.longevity``.
Crossover solvers use it to treat longevity as a continuous variable, and
test harnesses use it to switch inference off with ``n_inf=0``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from enum import Enum

from .model import (
    Direction,
    Role,
    Topology,
    WorkloadProfile,
    comm_energy,
    comm_latency,
    compute_energy,
    compute_latency,
)


class Scenario(str, Enum):
    S1 = "S1_GroundCentric"
    S2 = "S2_SplitRIC"
    S3 = "S3_MultiLayer"

    @property
    def short(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "Scenario":
        key = text.strip().upper()
        for s in cls:
            if key in (s.name, s.value.upper()):
                return s
        raise ValueError(f"unknown scenario {text!r} (expected s1, s2 or s3)")


SCENARIOS = (Scenario.S1, Scenario.S2, Scenario.S3)


@dataclass(frozen=True)
class EnergyBreakdown:
    scenario: Scenario
    training_offload: float
    model_transfer: float
    inference_total: float
    geo_training_compute: float
    geo_dataset_rx: float
    geo_model_tx: float
    total: float

    units = "J"

    def components(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name not in ("scenario", "total")}

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario.value,
            "components": self.components(),
            "total": self.total,
            "units": self.units,
        }


@dataclass(frozen=True)
class LatencyBreakdown:
    scenario: Scenario
    wait: float
    data_upload: float
    training_compute: float
    model_download: float
    inference_total: float
    propagation: float
    total: float

    units = "s"

    @property
    def learning_total(self) -> float:
        """Total without the inference phase: the time to close one model
        update cycle."""
        return self.wait + self.data_upload + self.training_compute + self.model_download + self.propagation

    def components(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name not in ("scenario", "total")}

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario.value,
            "components": self.components(),
            "total": self.total,
            "learning_total": self.learning_total,
            "units": self.units,
        }


@dataclass(frozen=True)
class LoopLatency:
    scenario: Scenario
    latency: float
    deadline: float
    deadline_met: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["scenario"] = self.scenario.value
        d["units"] = "s"
        return d


def _events(w: WorkloadProfile, n_inf: float | None) -> float:
    return w.longevity if n_inf is None else n_inf


def lifecycle_energy(
    scenario: Scenario, topo: Topology, w: WorkloadProfile, n_inf: float | None = None
) -> EnergyBreakdown:
    n = _events(w, n_inf)
    inf = w.inference
    parts = dict(
        training_offload=0.0,
        model_transfer=0.0,
        inference_total=0.0,
        geo_training_compute=0.0,
        geo_dataset_rx=0.0,
        geo_model_tx=0.0,
    )
    if scenario is Scenario.S1:
        feeder = topo.require_feeder()
        parts["training_offload"] = comm_energy(w.training.dataset_size, feeder, Direction.UPLINK, Role.TRANSMIT)
        parts["inference_total"] = n * comm_energy(inf.input_size, feeder, Direction.UPLINK, Role.TRANSMIT)
    elif scenario is Scenario.S2:
        feeder = topo.require_feeder()
        parts["training_offload"] = comm_energy(w.training.dataset_size, feeder, Direction.UPLINK, Role.TRANSMIT)
        parts["model_transfer"] = comm_energy(w.model_size, feeder, Direction.DOWNLINK, Role.RECEIVE)
        parts["inference_total"] = n * compute_energy(inf.complexity, topo.leo)
    else:
        geo, isl = topo.require_multilayer()
        parts["inference_total"] = n * compute_energy(inf.complexity, topo.leo)
        parts["training_offload"] = comm_energy(w.training.dataset_size, isl, Direction.UPLINK, Role.TRANSMIT)
        parts["model_transfer"] = comm_energy(w.model_size, isl, Direction.DOWNLINK, Role.RECEIVE)
        parts["geo_training_compute"] = compute_energy(w.training.complexity, geo)
        parts["geo_dataset_rx"] = comm_energy(w.training.dataset_size, isl, Direction.UPLINK, Role.RECEIVE)
        parts["geo_model_tx"] = comm_energy(w.model_size, isl, Direction.DOWNLINK, Role.TRANSMIT)
    return EnergyBreakdown(scenario=scenario, total=sum(parts.values()), **parts)


def lifecycle_latency(
    scenario: Scenario, topo: Topology, w: WorkloadProfile, n_inf: float | None = None
) -> LatencyBreakdown:
    n = _events(w, n_inf)
    inf = w.inference
    parts = dict(
        wait=0.0,
        data_upload=0.0,
        training_compute=0.0,
        model_download=0.0,
        inference_total=0.0,
        propagation=0.0,
    )
    if scenario in (Scenario.S1, Scenario.S2):
        feeder = topo.require_feeder()
        parts["wait"] = feeder.wait_time if scenario is Scenario.S1 else 2 * feeder.wait_time
        parts["data_upload"] = w.training.dataset_size / feeder.uplink_rate
        parts["training_compute"] = compute_latency(w.training.complexity, topo.ground)
        if scenario is Scenario.S1:
            parts["inference_total"] = n * (feeder.rtt + inf.input_size / feeder.uplink_rate)
        else:
            parts["inference_total"] = n * compute_latency(inf.complexity, topo.leo)
    else:
        geo, isl = topo.require_multilayer()
        parts["propagation"] = isl.rtt
        parts["data_upload"] = w.training.dataset_size / isl.uplink_rate
        parts["training_compute"] = compute_latency(w.training.complexity, geo)
        parts["inference_total"] = n * compute_latency(inf.complexity, topo.leo)
    return LatencyBreakdown(scenario=scenario, total=sum(parts.values()), **parts)


def amortized_energy_per_inference(
    scenario: Scenario, topo: Topology, w: WorkloadProfile, n_inf: float | None = None
) -> float:
    n = _events(w, n_inf)
    if not n >= 1:
        raise ValueError("amortization needs at least one inference event")
    return lifecycle_energy(scenario, topo, w, n_inf=n).total / n


def control_loop_latency(scenario: Scenario, topo: Topology, w: WorkloadProfile) -> LoopLatency:
    """Latency of one sense-decide-actuate decision.

    S1 ships the input to the ground and the command back; S2 and S3 decide
    on board, with E2 over the internal bus.
    """
    inf = w.inference
    if scenario is Scenario.S1:
        feeder = topo.require_feeder()
        value = (
            feeder.rtt
            + inf.input_size / feeder.uplink_rate
            + inf.output_size / feeder.downlink_rate
            + compute_latency(inf.complexity, topo.ground)
        )
    else:
        value = compute_latency(inf.complexity, topo.leo) + comm_latency(inf.output_size, topo.internal)
    return LoopLatency(scenario, value, inf.deadline, value <= inf.deadline)


def breakdowns(scenario: Scenario, topo: Topology, w: WorkloadProfile) -> dict:
    return {
        "energy": lifecycle_energy(scenario, topo, w).to_dict(),
        "latency": lifecycle_latency(scenario, topo, w).to_dict(),
    }
