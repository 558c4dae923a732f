"""
Shared fixtures for the cftnvm test suite
"""

import random

import pytest

from cftnvm.characters import subgroup_character, subgroup_of_index
from cftnvm.config import ENV_MAX_ORDER, ENV_WORKERS, Settings, set_settings
from cftnvm.cyclotomic import CycNum
from cftnvm.finite_field import build_field


@pytest.fixture(autouse=True)
def default_settings(monkeypatch):
    """Every test starts from default settings and no environment overrides"""
    monkeypatch.delenv(ENV_MAX_ORDER, raising=False)
    monkeypatch.delenv(ENV_WORKERS, raising=False)
    set_settings(Settings())
    yield
    set_settings(None)


@pytest.fixture
def gf4():
    return build_field(2, 2)


@pytest.fixture
def gf7():
    return build_field(7, 1)


@pytest.fixture
def gf9():
    return build_field(3, 2)


@pytest.fixture
def gf7_index3_chi(gf7):
    """The nontrivial character on H = {1, 6} in GF(7)"""
    return subgroup_character(subgroup_of_index(gf7, 3), 1)


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture
def random_cycnum(rng):
    """Factory for CycNum values with small random integer coefficients"""
    def make(order: int, bound: int = 5) -> CycNum:
        return CycNum(order, [rng.randint(-bound, bound) for _ in range(order)])
    return make
