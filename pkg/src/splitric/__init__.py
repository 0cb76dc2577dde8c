"""Lifecycle energy/latency model and feasibility analysis for split-RIC
O-RAN deployments across ground, LEO and GEO segments."""

from .feasibility import (
    BoundaryVerdict,
    CrossoverResult,
    Objective,
    RegionLabel,
    classify,
    complexity_ceiling,
    continuity_gain,
    crossover,
    edge_advantage,
    link_efficiency,
    power_budget_check,
)
from .lifecycle import (
    Scenario,
    amortized_energy_per_inference,
    control_loop_latency,
    lifecycle_energy,
    lifecycle_latency,
)
from .model import (
    InferenceProfile,
    LinkProfile,
    NodeProfile,
    Topology,
    TrainingProfile,
    WorkloadProfile,
    comm_energy,
    comm_latency,
    compute_energy,
    compute_latency,
    reference_topology,
    reference_workload,
    shannon_rate,
)
from .sweep import AxisSpec, oracle_verify, run_energy_map, run_latency_map, run_sweep
from .units import Quantity, format_quantity, parse_quantity

__version__ = "0.1.0"
