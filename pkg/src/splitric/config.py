"""TOML scenario files and path-addressed overrides.

Layout::

    [nodes.ground]              # also nodes.leo, nodes.geo (geo optional)
    compute_capacity = "1 PFLOPS"
    energy_per_flop = "200 pJ/FLOP"
    # power_budget omitted = unbounded

    [links.feeder]              # also links.isl (optional)
    uplink_rate = "500 Mbit/s"
    ...

    [workload]
    model_size = "50 Mbit"
    longevity = 100000

    [workload.inference]
    input_size = "5 MB"
    ...

    [workload.training]
    dataset_size = "10 Gbit"
    complexity = "150 TFLOP"

Every value except ``longevity`` is a quantity string. Unknown sections or
keys are rejected.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

import tomli_w

from .model import (
    InferenceProfile,
    LinkKind,
    LinkProfile,
    NodeKind,
    NodeProfile,
    Topology,
    TrainingProfile,
    WorkloadProfile,
    reference_topology,
    reference_workload,
)
from .params import FIELD_DIMENSIONS, dimension_of, resolve, set_param
from .units import Dimension, Quantity, QuantityError, format_quantity, parse_quantity


class ConfigError(ValueError):
    pass


NODE_KINDS = {"ground": NodeKind.GROUND, "leo": NodeKind.LEO, "geo": NodeKind.GEO}
LINK_KINDS = {"feeder": LinkKind.FEEDER_RF, "isl": LinkKind.OPTICAL_ISL}

# candidate units when writing each field back out, largest first
_BITS = ("Gbit", "Mbit", "kbit", "bit")
_BYTES = ("GB", "MB", "kB", "B", "bit")
_RATES = ("Gbit/s", "Mbit/s", "kbit/s", "bit/s")
_TIMES = ("h", "min", "s", "ms")
DISPLAY_UNITS = {
    "compute_capacity": ("PFLOPS", "TFLOPS", "GFLOPS", "FLOPS"),
    "energy_per_flop": ("pJ/FLOP",),
    "power_budget": ("W",),
    "uplink_rate": _RATES,
    "downlink_rate": _RATES,
    "tx_power": ("W",),
    "rx_power": ("W",),
    "rtt": ("s", "ms"),
    "wait_time": _TIMES,
    "input_size": _BYTES,
    "output_size": _BYTES,
    "complexity": ("TFLOP", "GFLOP", "FLOP"),
    "deadline": ("s", "ms"),
    "dataset_size": _BITS,
    "model_size": _BITS,
}

UNBOUNDED = ("none", "unbounded", "unlimited")


def parse_value(path: str, raw) -> float | int | None:
    """Parse one config/override value for the parameter at *path*."""
    path = resolve(path)
    name = path.rsplit(".", 1)[1]
    if name == "longevity":
        if isinstance(raw, bool):
            raise ConfigError(f"{path}: expected an integer")
        if isinstance(raw, int):
            value = raw
        else:
            q = parse_quantity(str(raw), Dimension.DIMENSIONLESS)
            if q.value != int(q.value):
                raise ConfigError(f"{path}: longevity must be a whole number, got {raw!r}")
            value = int(q.value)
        return value
    if name == "power_budget" and isinstance(raw, str) and raw.strip().lower() in UNBOUNDED:
        return None
    if not isinstance(raw, str):
        raise ConfigError(f"{path}: expected a quantity string like \"15 W\", got {raw!r}")
    try:
        return parse_quantity(raw, dimension_of(path)).value
    except QuantityError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _section(data: dict, key: str, allowed: tuple[str, ...], where: str) -> dict:
    sec = data.get(key)
    if not isinstance(sec, dict):
        raise ConfigError(f"missing section [{where}]")
    unknown = set(sec) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{where}]: {', '.join(sorted(unknown))}")
    return sec


_NODE_KEYS = ("compute_capacity", "energy_per_flop", "power_budget")
_LINK_KEYS = ("uplink_rate", "downlink_rate", "tx_power", "rx_power", "rtt", "wait_time")
_INFERENCE_KEYS = ("input_size", "output_size", "complexity", "deadline")


def _node(nodes: dict, name: str) -> NodeProfile:
    sec = _section(nodes, name, _NODE_KEYS, f"nodes.{name}")
    vals = {k: parse_value(f"nodes.{name}.{k}", v) for k, v in sec.items()}
    for k in ("compute_capacity", "energy_per_flop"):
        if k not in vals:
            raise ConfigError(f"[nodes.{name}] needs {k}")
    return NodeProfile(name, NODE_KINDS[name], **vals)


def _link(links: dict, name: str) -> LinkProfile:
    sec = _section(links, name, _LINK_KEYS, f"links.{name}")
    vals = {k: parse_value(f"links.{name}.{k}", v) for k, v in sec.items()}
    for k in ("uplink_rate", "downlink_rate"):
        if k not in vals:
            raise ConfigError(f"[links.{name}] needs {k}")
    return LinkProfile(name, LINK_KINDS[name], **vals)


def _required(sec: dict, where: str, keys: tuple[str, ...]) -> None:
    missing = [k for k in keys if k not in sec]
    if missing:
        raise ConfigError(f"[{where}] needs {', '.join(missing)}")


def from_dict(data: dict) -> tuple[Topology, WorkloadProfile]:
    unknown = set(data) - {"nodes", "links", "workload"}
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    nodes = data.get("nodes", {})
    links = data.get("links", {})
    if set(nodes) - set(NODE_KINDS):
        raise ConfigError(f"unknown node(s): {', '.join(sorted(set(nodes) - set(NODE_KINDS)))}")
    if set(links) - set(LINK_KINDS):
        raise ConfigError(f"unknown link(s): {', '.join(sorted(set(links) - set(LINK_KINDS)))}")
    try:
        topo = Topology(
            ground=_node(nodes, "ground"),
            leo=_node(nodes, "leo"),
            geo=_node(nodes, "geo") if "geo" in nodes else None,
            feeder=_link(links, "feeder") if "feeder" in links else None,
            isl=_link(links, "isl") if "isl" in links else None,
        )
        wl = _section(data, "workload", ("model_size", "longevity", "inference", "training"), "workload")
        _required(wl, "workload", ("model_size", "longevity"))
        inf = _section(wl, "inference", _INFERENCE_KEYS, "workload.inference")
        _required(inf, "workload.inference", _INFERENCE_KEYS)
        tr = _section(wl, "training", ("dataset_size", "complexity"), "workload.training")
        _required(tr, "workload.training", ("dataset_size", "complexity"))
        w = WorkloadProfile(
            inference=InferenceProfile(**{k: parse_value(f"workload.inference.{k}", v) for k, v in inf.items()}),
            training=TrainingProfile(**{k: parse_value(f"workload.training.{k}", v) for k, v in tr.items()}),
            model_size=parse_value("workload.model_size", wl["model_size"]),
            longevity=parse_value("workload.longevity", wl["longevity"]),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return topo, w


def loads(text: str) -> tuple[Topology, WorkloadProfile]:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from None
    return from_dict(data)


def load(path: str | Path) -> tuple[Topology, WorkloadProfile]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from None
    return loads(text)


def _fmt(name: str, value: float) -> str:
    q = Quantity(value, FIELD_DIMENSIONS[name])
    if value == 0:
        return format_quantity(q)
    candidates = DISPLAY_UNITS[name]
    for unit in candidates:
        text = format_quantity(q, unit)
        number = text.split()[0]
        if unit == candidates[-1] or (float(number) >= 1 and len(number) <= 8):
            return text
    return format_quantity(q)


def to_dict(topo: Topology, w: WorkloadProfile) -> dict:
    nodes = {}
    for name in ("ground", "leo", "geo"):
        n = getattr(topo, name)
        if n is None:
            continue
        sec = {k: _fmt(k, getattr(n, k)) for k in _NODE_KEYS if getattr(n, k) is not None}
        nodes[name] = sec
    links = {}
    for name in ("feeder", "isl"):
        link = getattr(topo, name)
        if link is None:
            continue
        links[name] = {k: _fmt(k, getattr(link, k)) for k in _LINK_KEYS}
    inf = w.inference
    return {
        "nodes": nodes,
        "links": links,
        "workload": {
            "model_size": _fmt("model_size", w.model_size),
            "longevity": w.longevity,
            "inference": {k: _fmt(k, getattr(inf, k)) for k in _INFERENCE_KEYS},
            "training": {k: _fmt(k, getattr(w.training, k)) for k in ("dataset_size", "complexity")},
        },
    }


def dumps(topo: Topology, w: WorkloadProfile) -> str:
    return tomli_w.dumps(to_dict(topo, w))


def reference_defaults_toml() -> str:
    header = (
        "# Reference Ground / LEO / GEO deployment and workload.\n"
        "# training.complexity is calibrated (not tabulated): the GEO update loop\n"
        "# then closes in about 2 s.\n\n"
    )
    return header + dumps(reference_topology(), reference_workload())


def parse_override(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not of the form path=quantity")
    path, raw = text.split("=", 1)
    try:
        return resolve(path), raw.strip()
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None


def apply_overrides(
    topo: Topology, w: WorkloadProfile, overrides: list[tuple[str, str]]
) -> tuple[Topology, WorkloadProfile]:
    for path, raw in overrides:
        value = parse_value(path, raw)
        try:
            topo, w = set_param(topo, w, path, value)
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    return topo, w


@dataclass
class RunConfig:
    topology: Topology
    workload: WorkloadProfile
    overrides: list[tuple[str, str]] = field(default_factory=list)
    output: str = "json"
    output_path: str | None = None

    @classmethod
    def build(
        cls,
        config_path: str | None = None,
        overrides: list[str] | None = None,
        output: str = "json",
        output_path: str | None = None,
    ) -> "RunConfig":
        if config_path is None:
            topo, w = reference_topology(), reference_workload()
        else:
            topo, w = load(config_path)
        parsed = [parse_override(o) for o in overrides or []]
        topo, w = apply_overrides(topo, w, parsed)
        return cls(topo, w, parsed, output, output_path)
