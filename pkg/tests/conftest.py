from functools import lru_cache

import pytest

from classpower.catalogue import build_catalogue
from classpower.chartable import compute_character_table
from classpower.classalg import structure_constants
from classpower.group import conjugacy_classes


@lru_cache(maxsize=None)
def _entries():
    return {e.name: e for e in build_catalogue()}


@lru_cache(maxsize=None)
def analysed(name):
    """(G, dec, table) for a catalogue group, shared across tests."""
    G = _entries()[name].group
    dec = conjugacy_classes(G)
    return G, dec, compute_character_table(G, dec, structure_constants(dec))


def group_names():
    return [n for n, e in _entries().items() if not e.is_table_only]


@pytest.fixture(scope="session")
def catalogue():
    return _entries()


@pytest.fixture(scope="session")
def m11():
    return _entries()["M11"].table
