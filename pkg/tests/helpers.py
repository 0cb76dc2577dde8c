"""Shared constants and builders for the test suite."""

import dataclasses

from splitric.params import set_param

KB = 8e3  # bits per decimal kilobyte
MB = 8e6
GFLOP = 1e9


def with_params(topo, w, **values):
    """Apply ``a__b__c=value`` overrides (dotted paths with ``__``)."""
    for path, v in values.items():
        topo, w = set_param(topo, w, path.replace("__", "."), v)
    return topo, w


def unchecked(obj, **changes):
    """Copy a frozen profile, bypassing validation, for limiting-case tests."""
    new = dataclasses.replace(obj)
    for k, v in changes.items():
        object.__setattr__(new, k, v)
    return new
