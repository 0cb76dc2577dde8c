import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import GFLOP, KB, MB, unchecked, with_params
from splitric.feasibility import (
    BISECTION_RTOL,
    Objective,
    breakeven_input_size,
    classify,
    complexity_ceiling,
    continuity_gain,
    cost_difference,
    crossover,
    edge_advantage,
    link_efficiency,
    pick_winner,
    power_budget_check,
    rate_for_ceiling,
)
from splitric.lifecycle import SCENARIOS, Scenario
from splitric.model import Topology, reference_topology, reference_workload

S1, S2, S3 = SCENARIOS


# -- boundary conditions ----------------------------------------------------


def test_edge_advantage_marginal_at_85_kb(topo, work):
    v = edge_advantage(*with_params(topo, work, input_size=85 * KB))
    assert v.lhs == pytest.approx(0.02, rel=1e-12)
    assert v.rhs == pytest.approx(0.0204, rel=1e-12)
    assert v.holds and v.units == "J"


def test_edge_advantage_fails_at_10_kb(topo, work):
    v = edge_advantage(*with_params(topo, work, input_size=10 * KB))
    assert v.rhs == pytest.approx(0.0024, rel=1e-12)
    assert not v.holds and v.margin < 0


def test_edge_advantage_zero_compute(topo, work):
    w = unchecked(work, inference=unchecked(work.inference, complexity=0.0))
    v = edge_advantage(topo, w)
    assert v.lhs == 0.0 and v.holds


def test_link_efficiency_examples(topo, work):
    v = link_efficiency(topo, work)
    assert v.lhs == pytest.approx(15004.01, rel=1e-12)
    assert v.rhs == pytest.approx(300.0, rel=1e-12)
    assert not v.holds
    light = link_efficiency(*with_params(topo, work, workload__training__complexity=1e12))
    assert light.lhs == pytest.approx(104.01, rel=1e-12)
    assert light.holds


def test_link_efficiency_degenerate_tie(topo, work):
    w = unchecked(
        work,
        model_size=0.0,
        training=unchecked(work.training, dataset_size=0.0, complexity=0.0),
    )
    v = link_efficiency(topo, w)
    assert v.lhs == 0.0 and v.rhs == 0.0
    assert not v.holds


def test_continuity_gain_examples(topo, work):
    v = continuity_gain(topo, work)
    # (0.24 + 0.75) - (0.02 + 0.15)
    assert v.lhs == pytest.approx(0.82, rel=1e-12)
    assert v.rhs == 600.0 and v.holds and v.units == "s"
    assert not continuity_gain(*with_params(topo, work, wait_time=0.0)).holds
    assert not continuity_gain(*with_params(topo, work, wait_time=v.lhs)).holds


def test_boundaries_need_geo(topo, work):
    bare = Topology(ground=topo.ground, leo=topo.leo, feeder=topo.feeder)
    with pytest.raises(ValueError):
        link_efficiency(bare, work)
    with pytest.raises(ValueError):
        continuity_gain(bare, work)


_draw = st.fixed_dictionaries(
    {
        "input_size": st.floats(10 * KB, 50_000 * KB),
        "complexity": st.floats(0.1 * GFLOP, 500 * GFLOP),
        "wait_time": st.floats(0, 3600),
        "workload__training__complexity": st.floats(1e12, 1e16),
    }
)


@settings(max_examples=200)
@given(_draw)
def test_verdict_margin_coherence(values):
    t, w = with_params(reference_topology(), reference_workload(), **values)
    for fn in (edge_advantage, link_efficiency, continuity_gain):
        v = fn(t, w)
        assert v.holds == (v.margin > 0)
        assert v.margin == v.rhs - v.lhs


# -- closed forms -------------------------------------------------------------


def test_closed_forms(topo, work):
    # P_tx * delta / (R * eps) = 15 * 4e7 / (5e8 * 2e-11)
    assert complexity_ceiling(topo, work) == pytest.approx(60 * GFLOP, rel=1e-12)
    assert rate_for_ceiling(topo, work, 250 * GFLOP) == pytest.approx(120e6, rel=1e-12)
    # omega * eps * R / P_tx = 0.02 * 5e8 / 15 bits
    assert breakeven_input_size(topo, work) == pytest.approx(2e6 / 3, rel=1e-12)


# -- crossover ---------------------------------------------------------------


def test_input_size_crossover_per_op(topo, work):
    r = crossover("input_size", Objective.ENERGY, (S1, S2), topo, work, (10 * KB, 50_000 * KB), per_op=True)
    assert r.bracketed and r.method == "closed_form"
    assert r.value / 8 == pytest.approx(250000 / 3, rel=1e-9)
    assert abs(r.value / KB - 85) / 85 <= 0.05


def test_complexity_crossover_per_op(topo, work):
    r = crossover("complexity", "energy", (S1, S2), topo, work, (0.1 * GFLOP, 500 * GFLOP), per_op=True)
    assert r.value == pytest.approx(60 * GFLOP, rel=1e-9)


def test_longevity_crossover(topo, work):
    # S1: 300 + 1.2 N, S2: 300.5 + 0.02 N
    r = crossover("longevity", "energy", (S1, S2), topo, work, (1e-6, 1e7))
    assert r.method == "bisection" and r.iterations > 0
    assert r.value == pytest.approx(0.5 / 1.18, rel=1e-8)
    # S3: 15004.02 + 0.02 N, dominated by the GEO training bill
    r3 = crossover("longevity", "energy", (S1, S3), topo, work, (1.0, 1e6))
    assert r3.value == pytest.approx((15004.02 - 300.0) / (1.2 - 0.02), rel=1e-8)


def test_longevity_per_op_rejected(topo, work):
    with pytest.raises(ValueError):
        crossover("longevity", "energy", (S1, S2), topo, work, (1, 10), per_op=True)


def test_no_crossover_reports_sign(topo, work):
    r = crossover("wait_time", "latency", (S2, S3), topo, work, (0.0, 3600.0))
    assert not r.bracketed and r.value is None and r.status == "no_crossover"
    assert r.sign == 1
    assert r.to_dict()["status"] == "no_crossover"


@pytest.mark.parametrize(
    "axis, pair, objective, rng, extra",
    [
        ("input_size", (S1, S2), "energy", (10 * KB, 50_000 * KB), {}),
        ("complexity", (S1, S2), "energy", (0.1 * GFLOP, 500 * GFLOP), {}),
        ("wait_time", (S1, S2), "latency", (0.0, 3600.0), {"input_size": 10 * KB}),
        ("wait_time", (S2, S3), "latency", (0.0, 3600.0), {"workload__training__complexity": 1e16}),
        ("uplink_rate", (S1, S2), "energy", (50e6, 1e9), {"input_size": 100 * KB}),
    ],
)
def test_closed_form_matches_bisection(topo, work, axis, pair, objective, rng, extra):
    t, w = with_params(topo, work, **extra)
    cf = crossover(axis, objective, pair, t, w, rng, method="closed_form")
    bi = crossover(axis, objective, pair, t, w, rng, method="bisection")
    assert cf.bracketed and bi.bracketed
    assert cf.value == pytest.approx(bi.value, rel=1e-9)
    assert abs(bi.residual) <= abs(cost_difference(axis, objective, pair, t, w)(rng[0]))


@pytest.mark.parametrize(
    "axis, pair, objective, rng, extra",
    [
        ("input_size", (S1, S2), "energy", (10 * KB, 50_000 * KB), {}),
        ("complexity", (S1, S2), "energy", (0.1 * GFLOP, 500 * GFLOP), {}),
        ("longevity", (S1, S3), "energy", (1.0, 1e6), {}),
        ("wait_time", (S1, S2), "latency", (0.0, 3600.0), {"input_size": 10 * KB}),
        ("uplink_rate", (S1, S2), "energy", (50e6, 1e9), {"input_size": 100 * KB}),
    ],
)
def test_crossover_sign_change(topo, work, axis, pair, objective, rng, extra):
    t, w = with_params(topo, work, **extra)
    r = crossover(axis, objective, pair, t, w, rng)
    f = cost_difference(axis, objective, pair, t, w)
    lo, hi = f(r.value * (1 - 1e-6)), f(r.value * (1 + 1e-6))
    assert lo * hi < 0


def test_crossover_rejects_bad_ranges(topo, work):
    for rng in ((5.0, 1.0), (-1.0, 1.0), (0.0, math.inf)):
        with pytest.raises(ValueError):
            crossover("input_size", "energy", (S1, S2), topo, work, rng)
    with pytest.raises(ValueError):
        crossover("uplink_rate", "energy", (S1, S2), topo, work, (0.0, 1e9))
    with pytest.raises(ValueError):
        crossover("longevity", "energy", (S1, S2), topo, work, (1, 10), method="closed_form")
    with pytest.raises(ValueError):
        crossover("deadline", "energy", (S1, S2), topo, work, (1, 10))


# -- classification ----------------------------------------------------------


@pytest.mark.parametrize(
    "values, objective, winner",
    [
        ({"input_size": 10 * KB}, "energy", S1),
        ({"input_size": 5 * MB}, "energy", S2),
        ({"wait_time": 2700.0}, "latency", S3),
    ],
)
def test_classify_examples(topo, work, values, objective, winner):
    label = classify(*with_params(topo, work, **values), objective)
    assert label.winner is winner
    assert label.totals[winner] == min(label.totals.values())
    assert all(m >= 0 for m in label.margins.values())


def test_tie_goes_to_simpler():
    assert pick_winner({S3: 1.0, S2: 1.0, S1: 2.0}) is S2
    assert pick_winner({S1: 1.0, S3: 1.0}) is S1


def test_classify_skips_missing_segments(topo, work):
    bare = Topology(ground=topo.ground, leo=topo.leo, feeder=topo.feeder)
    label = classify(bare, work, "energy")
    assert label.skipped == (S3,)
    assert set(label.totals) == {S1, S2}


@given(st.dictionaries(st.sampled_from(SCENARIOS), st.floats(0, 1e9), min_size=1), st.floats(1e-3, 1e3))
def test_winner_scale_invariant(totals, k):
    scaled = {s: v * k for s, v in totals.items()}
    if len(set(scaled.values())) == len(set(totals.values())):
        assert pick_winner(scaled) is pick_winner(totals)


# -- power budget -------------------------------------------------------------


def test_power_budget_examples(topo, work):
    ok = power_budget_check(topo.leo, work, 100.0)
    assert ok.average_power == pytest.approx(2.0, rel=1e-12) and ok.within_budget
    heavy = with_params(topo, work, complexity=500 * GFLOP)[1]
    bad = power_budget_check(topo.leo, heavy, 100.0)
    assert bad.average_power == pytest.approx(1000.0, rel=1e-12) and not bad.within_budget
    idle = power_budget_check(topo.leo, heavy, 0.0)
    assert idle.average_power == 0.0 and idle.within_budget
    assert power_budget_check(topo.ground, heavy, 1e6).within_budget
