import functools

import pytest

from softplanes.algebra import field_of_order, semifield_load
from softplanes.constructions import heisenberg, likeable
from softplanes.fileio import SHIPPED_SEMIFIELD
from softplanes.plane import build_plane, right_action


@functools.lru_cache(maxsize=None)
def fixture_triple(name: str):
    if name.startswith("heis"):
        return heisenberg(field_of_order(int(name[4:])))
    if name == "semifield16":
        return heisenberg(semifield_load(SHIPPED_SEMIFIELD))
    if name == "likeable25":
        return likeable(5)
    raise KeyError(name)


@functools.lru_cache(maxsize=None)
def fixture_plane(name: str):
    t = fixture_triple(name)
    plane = build_plane(t)
    return t, plane, right_action(t, plane)


@pytest.fixture(scope="session")
def fano():
    return fixture_plane("heis2")


@pytest.fixture(scope="session")
def likeable_bundle():
    return fixture_plane("likeable25")


@pytest.fixture(scope="session")
def semifield_bundle():
    return fixture_plane("semifield16")
