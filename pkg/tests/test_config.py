import pytest

from splitric.config import (
    ConfigError,
    RunConfig,
    apply_overrides,
    dumps,
    loads,
    reference_defaults_toml,
    parse_override,
    parse_value,
)
from splitric.model import reference_topology, reference_workload


def test_preset_round_trip():
    topo, w = loads(reference_defaults_toml())
    assert topo == reference_topology()
    assert w == reference_workload()


def test_preset_is_readable():
    text = reference_defaults_toml()
    for snippet in ('"1 PFLOPS"', '"20 pJ/FLOP"', '"500 Mbit/s"', '"5 MB"', '"10 Gbit"', "longevity = 100000"):
        assert snippet in text
    assert "power_budget" in text.split("[nodes.leo]")[1].split("[")[0]
    assert "power_budget" not in text.split("[nodes.ground]")[1].split("[")[0]


def test_dump_load_is_stable():
    text = dumps(reference_topology(), reference_workload())
    assert dumps(*loads(text)) == text


def test_override_matches_file_value():
    via_set = RunConfig.build(overrides=['links.feeder.wait_time=45 min'])
    text = reference_defaults_toml().replace('wait_time = "10 min"', 'wait_time = "45 min"')
    assert text != reference_defaults_toml()
    assert loads(text) == (via_set.topology, via_set.workload)


def test_aliases_and_hyphens():
    assert parse_override("wait-time=45 min") == ("links.feeder.wait_time", "45 min")
    topo, w = apply_overrides(reference_topology(), reference_workload(), [parse_override("input_size=85 kB")])
    assert w.inference.input_size == 680000.0


@pytest.mark.parametrize("text", ["nodes.moon.rtt=1 s", "nodes.leo.energy_per_flop", "nope=3"])
def test_bad_overrides(text):
    with pytest.raises(ConfigError):
        parse_override(text)


@pytest.mark.parametrize(
    "path, raw",
    [
        ("links.feeder.wait_time", "5 W"),
        ("links.feeder.wait_time", 5),
        ("workload.longevity", "2.5"),
        ("workload.longevity", True),
        ("workload.inference.complexity", "3 GFLOPS"),
    ],
)
def test_bad_values(path, raw):
    with pytest.raises((ConfigError, ValueError)):
        parse_value(path, raw)


def test_unbounded_power():
    assert parse_value("nodes.leo.power_budget", "unbounded") is None


def test_hard_invariant_in_override_is_config_error():
    with pytest.raises(ConfigError):
        RunConfig.build(overrides=["workload.longevity=0"])


@pytest.mark.parametrize(
    "mutate",
    [
        lambda t: t + "\n[extra]\nx = 1\n",
        lambda t: t.replace("[nodes.leo]", "[nodes.leo]\nfoo = \"1 s\""),
        lambda t: t.replace('compute_capacity = "1 PFLOPS"\n', ""),
        lambda t: t.replace("[links.feeder]", "[links.laser]"),
        lambda t: t.replace('"10 Gbit"', '"10 Gbit/s"'),
        lambda t: t + "[[[",
    ],
)
def test_bad_files_rejected(mutate):
    with pytest.raises(ConfigError):
        loads(mutate(reference_defaults_toml()))


def test_geo_optional():
    text = reference_defaults_toml()
    head, rest = text.split("[nodes.geo]")
    rest = rest[rest.index("\n[") :]
    topo, _ = loads(head + rest)
    assert topo.geo is None
