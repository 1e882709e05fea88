"""Shared fixtures: grids and Cauchy-Green operators are expensive to build,
so the common resolutions are session-scoped."""

import numpy as np
import pytest

from jholo import CGOperator, make_grid


@pytest.fixture(scope="session")
def grid32():
    return make_grid(1.0, 32)


@pytest.fixture(scope="session")
def grid64():
    return make_grid(1.0, 64)


@pytest.fixture(scope="session")
def grid128():
    return make_grid(1.0, 128)


@pytest.fixture(scope="session")
def op32(grid32):
    return CGOperator(grid32)


@pytest.fixture(scope="session")
def op64(grid64):
    return CGOperator(grid64)


@pytest.fixture(scope="session")
def op128(grid128):
    return CGOperator(grid128)
