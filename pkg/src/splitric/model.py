"""Node, link and workload profiles plus the four per-hop cost primitives.

All fields are canonical SI floats (bits, bit/s, s, J, W, FLOP, FLOP/s,
J/FLOP). ``reference_topology`` and ``reference_workload`` build the
Ground / LEO / GEO deployment and workload used throughout the analysis.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, fields
from enum import Enum


class ModelError(ValueError):
    """Invalid profile values or a topology missing a required element."""


class SoftAssumptionWarning(UserWarning):
    """A typical-case modelling assumption does not hold for this input."""


class NodeKind(str, Enum):
    GROUND = "Ground"
    LEO = "LEO"
    GEO = "GEO"


class LinkKind(str, Enum):
    FEEDER_RF = "FeederRF"
    OPTICAL_ISL = "OpticalISL"
    INTERNAL_BUS = "InternalBus"


class Direction(str, Enum):
    UPLINK = "uplink"
    DOWNLINK = "downlink"


class Role(str, Enum):
    TRANSMIT = "transmit"
    RECEIVE = "receive"


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ModelError(msg)


def _finite(obj, *names: str) -> None:
    for name in names:
        v = getattr(obj, name)
        if v is not None and not math.isfinite(v):
            raise ModelError(f"{type(obj).__name__}.{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class NodeProfile:
    id: str
    kind: NodeKind
    compute_capacity: float  # FLOP/s
    energy_per_flop: float  # J/FLOP
    power_budget: float | None = None  # W, None = unbounded

    def __post_init__(self):
        _finite(self, "compute_capacity", "energy_per_flop", "power_budget")
        _check(self.compute_capacity > 0, f"node {self.id}: compute_capacity must be > 0")
        _check(self.energy_per_flop > 0, f"node {self.id}: energy_per_flop must be > 0")
        if self.power_budget is not None:
            _check(self.power_budget > 0, f"node {self.id}: power_budget must be > 0")


@dataclass(frozen=True)
class LinkProfile:
    id: str
    kind: LinkKind
    uplink_rate: float  # bit/s
    downlink_rate: float  # bit/s
    tx_power: float = 0.0  # W
    rx_power: float = 0.0  # W
    rtt: float = 0.0  # s
    wait_time: float = 0.0  # s, mean wait for the next contact window

    def __post_init__(self):
        _finite(self, "uplink_rate", "downlink_rate", "tx_power", "rx_power", "rtt", "wait_time")
        _check(self.uplink_rate > 0, f"link {self.id}: uplink_rate must be > 0")
        _check(self.downlink_rate > 0, f"link {self.id}: downlink_rate must be > 0")
        for name in ("tx_power", "rx_power", "rtt", "wait_time"):
            _check(getattr(self, name) >= 0, f"link {self.id}: {name} must be >= 0")
        if self.kind is LinkKind.INTERNAL_BUS:
            _check(
                self.rtt == 0 and self.wait_time == 0,
                f"link {self.id}: internal bus must have rtt = 0 and wait_time = 0",
            )

    def rate(self, direction: Direction) -> float:
        return self.uplink_rate if direction is Direction.UPLINK else self.downlink_rate


@dataclass(frozen=True)
class InferenceProfile:
    input_size: float  # bits per inference
    output_size: float  # bits per inference
    complexity: float  # FLOP per inference
    deadline: float  # s

    def __post_init__(self):
        _finite(self, "input_size", "output_size", "complexity", "deadline")
        _check(self.input_size > 0, "inference.input_size must be > 0")
        _check(self.output_size >= 0, "inference.output_size must be >= 0")
        _check(self.complexity > 0, "inference.complexity must be > 0")
        _check(self.deadline > 0, "inference.deadline must be > 0")
        if self.output_size >= self.input_size:
            warnings.warn(
                f"inference output ({self.output_size:g} bit) is not smaller than "
                f"its input ({self.input_size:g} bit)",
                SoftAssumptionWarning,
                stacklevel=3,
            )


@dataclass(frozen=True)
class TrainingProfile:
    dataset_size: float  # bits
    complexity: float  # FLOP

    def __post_init__(self):
        _finite(self, "dataset_size", "complexity")
        _check(self.dataset_size > 0, "training.dataset_size must be > 0")
        _check(self.complexity > 0, "training.complexity must be > 0")


@dataclass(frozen=True)
class WorkloadProfile:
    inference: InferenceProfile
    training: TrainingProfile
    model_size: float  # bits
    longevity: int  # inference events served per trained model

    def __post_init__(self):
        _finite(self, "model_size")
        _check(self.model_size > 0, "workload.model_size must be > 0")
        _check(
            isinstance(self.longevity, int) and not isinstance(self.longevity, bool),
            f"workload.longevity must be an integer, got {self.longevity!r}",
        )
        _check(self.longevity >= 1, "workload.longevity must be >= 1")
        if not self.training.dataset_size > self.inference.input_size:
            warnings.warn(
                f"training dataset ({self.training.dataset_size:g} bit) is not larger "
                f"than one inference input ({self.inference.input_size:g} bit)",
                SoftAssumptionWarning,
                stacklevel=3,
            )


def _internal_bus() -> LinkProfile:
    # Rates are nominal; the bus never contributes cost.
    return LinkProfile("e2-bus", LinkKind.INTERNAL_BUS, uplink_rate=1e11, downlink_rate=1e11)


@dataclass(frozen=True)
class Topology:
    ground: NodeProfile
    leo: NodeProfile
    feeder: LinkProfile | None = None
    geo: NodeProfile | None = None
    isl: LinkProfile | None = None
    internal: LinkProfile = field(default_factory=_internal_bus)

    def require_feeder(self) -> LinkProfile:
        if self.feeder is None:
            raise ModelError("topology has no feeder link")
        return self.feeder

    def require_multilayer(self) -> tuple[NodeProfile, LinkProfile]:
        if self.geo is None or self.isl is None:
            raise ModelError("topology has no GEO node and ISL")
        return self.geo, self.isl


# Reference hardware and link values.
def default_ground() -> NodeProfile:
    return NodeProfile("ground", NodeKind.GROUND, compute_capacity=1e15, energy_per_flop=200e-12)


def default_leo() -> NodeProfile:
    return NodeProfile("leo", NodeKind.LEO, compute_capacity=1e13, energy_per_flop=20e-12, power_budget=20.0)


def default_geo() -> NodeProfile:
    return NodeProfile("geo", NodeKind.GEO, compute_capacity=2e14, energy_per_flop=100e-12, power_budget=1000.0)


def default_feeder() -> LinkProfile:
    return LinkProfile(
        "feeder",
        LinkKind.FEEDER_RF,
        uplink_rate=500e6,
        downlink_rate=500e6,
        tx_power=15.0,
        rx_power=5.0,
        rtt=0.020,
        wait_time=600.0,
    )


def default_isl() -> LinkProfile:
    return LinkProfile(
        "isl",
        LinkKind.OPTICAL_ISL,
        uplink_rate=10e9,
        downlink_rate=10e9,
        tx_power=2.0,
        rx_power=2.0,
        rtt=0.240,
        wait_time=0.0,
    )


def reference_topology() -> Topology:
    return Topology(
        ground=default_ground(),
        leo=default_leo(),
        feeder=default_feeder(),
        geo=default_geo(),
        isl=default_isl(),
    )


def reference_workload() -> WorkloadProfile:
    """Reference workload: 5 MB spectrogram input, 1 GFLOP forward pass,
    10 Gbit dataset, 50 Mbit model, 1e5 inferences per model."""
    return WorkloadProfile(
        inference=InferenceProfile(
            input_size=40e6,
            output_size=8e3,
            complexity=1e9,
            deadline=0.010,
        ),
        # Training FLOPs are not tabulated; 1.5e14 puts the GEO update loop near 2 s.
        training=TrainingProfile(dataset_size=1e10, complexity=1.5e14),
        model_size=50e6,
        longevity=100_000,
    )


# ---------------------------------------------------------------------------
# cost primitives


def compute_energy(flop: float, node: NodeProfile) -> float:
    """Energy in joules to execute *flop* operations on *node*."""
    if flop < 0:
        raise ModelError("workload must be >= 0 FLOP")
    return flop * node.energy_per_flop


def compute_latency(flop: float, node: NodeProfile) -> float:
    if flop < 0:
        raise ModelError("workload must be >= 0 FLOP")
    return flop / node.compute_capacity


def comm_energy(
    bits: float,
    link: LinkProfile,
    direction: Direction = Direction.UPLINK,
    role: Role = Role.TRANSMIT,
    co_located: bool = False,
) -> float:
    """Radio energy to move *bits* over *link*, as seen by the transmitting or
    receiving end. Zero when source and processor coincide or over the
    on-board bus."""
    if bits < 0:
        raise ModelError("data volume must be >= 0 bits")
    if co_located or link.kind is LinkKind.INTERNAL_BUS:
        return 0.0
    power = link.tx_power if role is Role.TRANSMIT else link.rx_power
    return power * bits / link.rate(direction)


def comm_latency(
    bits: float,
    link: LinkProfile,
    direction: Direction = Direction.UPLINK,
    co_located: bool = False,
) -> float:
    """Serialization plus one-way propagation (half the RTT)."""
    if bits < 0:
        raise ModelError("data volume must be >= 0 bits")
    if co_located or link.kind is LinkKind.INTERNAL_BUS:
        return 0.0
    return bits / link.rate(direction) + link.rtt / 2


def shannon_rate(bandwidth: float, snr_linear: float) -> float:
    """Channel capacity in bit/s for *bandwidth* Hz at linear SNR."""
    if not bandwidth > 0:
        raise ModelError("bandwidth must be > 0")
    if snr_linear < 0:
        raise ModelError("snr must be >= 0")
    return bandwidth * math.log2(1.0 + snr_linear)


def numeric_fields(obj) -> list[str]:
    return [f.name for f in fields(obj) if f.name not in ("id", "kind")]
