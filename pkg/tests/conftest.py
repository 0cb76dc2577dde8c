import pytest

from splitric.model import reference_topology, reference_workload


@pytest.fixture
def topo():
    return reference_topology()


@pytest.fixture
def work():
    return reference_workload()
