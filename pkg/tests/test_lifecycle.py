import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import GFLOP, KB, MB, unchecked, with_params
from splitric.lifecycle import (
    SCENARIOS,
    Scenario,
    amortized_energy_per_inference,
    breakdowns,
    control_loop_latency,
    lifecycle_energy,
    lifecycle_latency,
)
from splitric.model import SoftAssumptionWarning, Topology, reference_topology, reference_workload


def test_scenario_parse():
    assert Scenario.parse("s2") is Scenario.S2
    assert Scenario.parse("S3_MultiLayer") is Scenario.S3
    assert [s.short for s in SCENARIOS] == ["s1", "s2", "s3"]
    with pytest.raises(ValueError):
        Scenario.parse("s4")


def test_s1_energy_at_10_mb(topo, work):
    t, w = with_params(topo, work, workload__inference__input_size=10 * MB)
    b = lifecycle_energy(Scenario.S1, t, w)
    # 15 W * 1e10 / 5e8 + 1e5 * 15 W * 8e7 / 5e8
    assert b.training_offload == pytest.approx(300.0, rel=1e-12)
    assert b.inference_total == pytest.approx(240000.0, rel=1e-12)
    assert b.total == pytest.approx(240300.0, rel=1e-12)


def test_s2_energy(topo, work):
    b = lifecycle_energy(Scenario.S2, topo, work)
    assert (b.training_offload, b.model_transfer) == pytest.approx((300.0, 0.5), rel=1e-12)
    assert b.inference_total == pytest.approx(2000.0, rel=1e-12)
    assert b.total == pytest.approx(2300.5, rel=1e-12)


def test_s3_energy(topo, work):
    b = lifecycle_energy(Scenario.S3, topo, work)
    # ISL: 2 W * 1e10 / 1e10 tx and rx; model 2 W * 5e7 / 1e10 both ends
    assert b.training_offload == pytest.approx(2.0, rel=1e-12)
    assert b.geo_dataset_rx == pytest.approx(2.0, rel=1e-12)
    assert b.model_transfer == pytest.approx(0.01, rel=1e-12)
    assert b.geo_model_tx == pytest.approx(0.01, rel=1e-12)
    assert b.geo_training_compute == pytest.approx(15000.0, rel=1e-12)
    assert b.total == pytest.approx(17004.02, rel=1e-12)


def test_zero_events_zero_inference(topo, work):
    for s in SCENARIOS:
        assert lifecycle_energy(s, topo, work, n_inf=0).inference_total == 0.0
        assert lifecycle_latency(s, topo, work, n_inf=0).inference_total == 0.0


def test_s3_learning_loop(topo, work):
    b = lifecycle_latency(Scenario.S3, topo, work)
    assert b.wait == 0.0
    assert b.propagation == pytest.approx(0.24)
    assert b.data_upload == pytest.approx(1.0)
    assert b.training_compute == pytest.approx(0.75)
    assert b.learning_total == pytest.approx(1.99, rel=1e-12)


def test_s2_double_wait(topo, work):
    t, w = with_params(topo, work, wait_time=2700.0)
    assert lifecycle_latency(Scenario.S2, t, w).wait == 5400.0
    assert lifecycle_latency(Scenario.S1, t, w).wait == 2700.0


def test_s1_single_event_pure_rtt(topo, work):
    with pytest.warns(SoftAssumptionWarning):
        t, w = with_params(topo, work, input_size=1e-6, longevity=1)
    assert lifecycle_latency(Scenario.S1, t, w).inference_total == pytest.approx(0.02, rel=1e-9)


def test_amortized_examples(topo, work):
    assert amortized_energy_per_inference(Scenario.S2, topo, work) == pytest.approx(0.023005, rel=1e-12)  # 2300.5 J / 1e5
    t, w = with_params(topo, work, longevity=1)
    assert amortized_energy_per_inference(Scenario.S2, t, w) == pytest.approx(300.52, rel=1e-12)
    far = amortized_energy_per_inference(Scenario.S1, topo, work, n_inf=1e12)
    assert far == pytest.approx(1.2, rel=1e-9)
    with pytest.raises(ValueError):
        amortized_energy_per_inference(Scenario.S2, topo, work, n_inf=0.5)


def test_amortization_limit_at_1e9(topo, work):
    for s, per_op in ((Scenario.S1, 1.2), (Scenario.S2, 0.02), (Scenario.S3, 0.02)):
        got = amortized_energy_per_inference(s, topo, work, n_inf=1e9)
        assert got == pytest.approx(per_op, rel=1e-3)


def test_control_loop_examples(topo, work):
    s1 = control_loop_latency(Scenario.S1, topo, work)
    # 20 ms RTT + 80 ms upload + 16 us result downlink + 1 us ground compute
    assert s1.latency == pytest.approx(0.02 + 0.08 + 8e3 / 5e8 + 1e-6, rel=1e-12)
    assert s1.deadline_met is False
    s2 = control_loop_latency(Scenario.S2, topo, work)
    assert s2.latency == pytest.approx(1e-4, rel=1e-12)
    assert s2.deadline_met is True


def test_control_loop_zero_complexity(topo, work):
    w = unchecked(work, inference=unchecked(work.inference, complexity=0.0))
    r = control_loop_latency(Scenario.S2, topo, w)
    assert r.latency == 0.0 and r.deadline_met


def test_missing_segments_rejected(topo, work):
    bare = Topology(ground=topo.ground, leo=topo.leo)
    with pytest.raises(ValueError):
        lifecycle_energy(Scenario.S3, bare, work)
    with pytest.raises(ValueError):
        lifecycle_latency(Scenario.S1, bare, work)


def test_breakdowns_json_shape(topo, work):
    d = breakdowns(Scenario.S2, topo, work)
    assert d["energy"]["units"] == "J" and d["latency"]["units"] == "s"
    assert d["energy"]["total"] == pytest.approx(2300.5)
    assert set(d["energy"]["components"]) >= {"training_offload", "model_transfer", "inference_total"}


_draw = st.fixed_dictionaries(
    {
        "input_size": st.floats(10 * KB, 50_000 * KB),
        "complexity": st.floats(0.1 * GFLOP, 500 * GFLOP),
        "wait_time": st.floats(0, 3600),
        "longevity": st.integers(1, 10**6),
        "workload__training__complexity": st.floats(1e12, 1e16),
    }
)


@settings(max_examples=200)
@given(_draw)
def test_decomposition_exact(values):
    t, w = with_params(reference_topology(), reference_workload(), **values)
    for s in SCENARIOS:
        for b in (lifecycle_energy(s, t, w), lifecycle_latency(s, t, w)):
            comps = list(b.components().values())
            assert b.total == sum(comps)
            assert min(comps) >= 0


@settings(max_examples=200)
@given(_draw, st.floats(10 * KB, 50_000 * KB))
def test_s2_s3_energy_independent_of_input(values, other):
    t, w = with_params(reference_topology(), reference_workload(), **values)
    t2, w2 = with_params(t, w, input_size=other)
    for s in (Scenario.S2, Scenario.S3):
        assert lifecycle_energy(s, t, w).total == lifecycle_energy(s, t2, w2).total


@settings(max_examples=200)
@given(_draw, st.floats(1.001, 10))
def test_monotonicity(values, k):
    t, w = with_params(reference_topology(), reference_workload(), **values)
    j1 = lifecycle_energy(Scenario.S1, t, w).total
    j2 = lifecycle_energy(Scenario.S2, t, w).total
    bigger = [("input_size", w.inference.input_size * k), ("longevity", w.longevity + 1), ("uplink_rate", t.feeder.uplink_rate / k)]
    for path, v in bigger:
        assert lifecycle_energy(Scenario.S1, *with_params(t, w, **{path: v})).total > j1
    for path, v in (("complexity", w.inference.complexity * k), ("longevity", w.longevity + 1)):
        assert lifecycle_energy(Scenario.S2, *with_params(t, w, **{path: v})).total > j2


@settings(max_examples=200)
@given(_draw)
def test_latency_gap_identity(values):
    t, w = with_params(reference_topology(), reference_workload(), **values)
    f, inf = t.feeder, w.inference
    gap = lifecycle_latency(Scenario.S2, t, w).total - lifecycle_latency(Scenario.S1, t, w).total
    want = f.wait_time + w.longevity * (inf.complexity / t.leo.compute_capacity - f.rtt - inf.input_size / f.uplink_rate)
    scale = lifecycle_latency(Scenario.S1, t, w).total + lifecycle_latency(Scenario.S2, t, w).total
    assert abs(gap - want) <= 1e-12 * scale
