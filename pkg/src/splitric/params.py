"""Dotted-path access to every numeric parameter of a topology/workload pair.

Paths mirror the configuration file sections::

    nodes.{ground,leo,geo}.{compute_capacity,energy_per_flop,power_budget}
    links.{feeder,isl}.{uplink_rate,downlink_rate,tx_power,rx_power,rtt,wait_time}
    workload.inference.{input_size,output_size,complexity,deadline}
    workload.training.{dataset_size,complexity}
    workload.{model_size,longevity}

A few short aliases name the sweep/crossover axes (``input_size``,
``complexity``, ``longevity``, ``wait_time``, ``uplink_rate``).
"""

from __future__ import annotations

from dataclasses import replace

from .model import ModelError, Topology, WorkloadProfile
from .units import Dimension

FIELD_DIMENSIONS: dict[str, Dimension] = {
    "compute_capacity": Dimension.FLOP_RATE,
    "energy_per_flop": Dimension.JOULES_PER_FLOP,
    "power_budget": Dimension.WATTS,
    "uplink_rate": Dimension.BIT_RATE,
    "downlink_rate": Dimension.BIT_RATE,
    "tx_power": Dimension.WATTS,
    "rx_power": Dimension.WATTS,
    "rtt": Dimension.SECONDS,
    "wait_time": Dimension.SECONDS,
    "input_size": Dimension.BITS,
    "output_size": Dimension.BITS,
    "complexity": Dimension.FLOP,
    "deadline": Dimension.SECONDS,
    "dataset_size": Dimension.BITS,
    "model_size": Dimension.BITS,
    "longevity": Dimension.DIMENSIONLESS,
}

COLUMN_SUFFIX: dict[Dimension, str] = {
    Dimension.BITS: "bits",
    Dimension.BIT_RATE: "bps",
    Dimension.SECONDS: "s",
    Dimension.JOULES: "J",
    Dimension.WATTS: "W",
    Dimension.FLOP: "flop",
    Dimension.FLOP_RATE: "flops",
    Dimension.JOULES_PER_FLOP: "J_per_flop",
    Dimension.HERTZ: "Hz",
    Dimension.DIMENSIONLESS: "",
}

ALIASES = {
    "input_size": "workload.inference.input_size",
    "complexity": "workload.inference.complexity",
    "longevity": "workload.longevity",
    "wait_time": "links.feeder.wait_time",
    "uplink_rate": "links.feeder.uplink_rate",
}

_NODES = ("ground", "leo", "geo")
_LINKS = ("feeder", "isl")
_NODE_FIELDS = ("compute_capacity", "energy_per_flop", "power_budget")
_LINK_FIELDS = ("uplink_rate", "downlink_rate", "tx_power", "rx_power", "rtt", "wait_time")
_INFERENCE_FIELDS = ("input_size", "output_size", "complexity", "deadline")
_TRAINING_FIELDS = ("dataset_size", "complexity")

ALL_PATHS: tuple[str, ...] = (
    *(f"nodes.{n}.{f}" for n in _NODES for f in _NODE_FIELDS),
    *(f"links.{l}.{f}" for l in _LINKS for f in _LINK_FIELDS),
    *(f"workload.inference.{f}" for f in _INFERENCE_FIELDS),
    *(f"workload.training.{f}" for f in _TRAINING_FIELDS),
    "workload.model_size",
    "workload.longevity",
)


def resolve(path: str) -> str:
    """Canonical dotted path for *path* or one of its aliases."""
    key = path.strip().replace("-", "_")
    key = ALIASES.get(key, key)
    if key not in ALL_PATHS:
        raise KeyError(f"unknown parameter path {path!r}")
    return key


def dimension_of(path: str) -> Dimension:
    return FIELD_DIMENSIONS[resolve(path).rsplit(".", 1)[1]]


def column_name(path: str) -> str:
    name = resolve(path).rsplit(".", 1)[1]
    suffix = COLUMN_SUFFIX[dimension_of(path)]
    return f"{name}_{suffix}" if suffix else name


def _container(topo: Topology, w: WorkloadProfile, parts: list[str]):
    root = parts[0]
    if root == "nodes" or root == "links":
        obj = getattr(topo, parts[1])
        if obj is None:
            raise ModelError(f"topology has no {parts[1]}")
        return obj
    if len(parts) == 3:
        return getattr(w, parts[1])
    return w


def get_param(topo: Topology, w: WorkloadProfile, path: str) -> float | None:
    parts = resolve(path).split(".")
    return getattr(_container(topo, w, parts), parts[-1])


def set_param(
    topo: Topology, w: WorkloadProfile, path: str, value: float | None
) -> tuple[Topology, WorkloadProfile]:
    """Return a new (topology, workload) with one parameter replaced.

    Longevity is rounded to the nearest integer.
    """
    parts = resolve(path).split(".")
    name = parts[-1]
    if name == "longevity" and value is not None:
        value = int(round(value))
    target = _container(topo, w, parts)
    new = replace(target, **{name: value})
    if parts[0] in ("nodes", "links"):
        return replace(topo, **{parts[1]: new}), w
    if len(parts) == 3:
        return topo, replace(w, **{parts[1]: new})
    return topo, new
