import os

import pytest
from hypothesis import settings

from torslat.weak_order import build_weak_order

# property tests are reproducible by default; set TORSLAT_TEST_SEED to vary sampling
settings.register_profile("repro", deadline=None, derandomize=True, max_examples=60)
settings.load_profile("repro")

SEED = int(os.environ.get("TORSLAT_TEST_SEED", "1729"))


@pytest.fixture(scope="session")
def seed():
    return SEED


@pytest.fixture(scope="session")
def s3():
    return build_weak_order(2)


@pytest.fixture(scope="session")
def s4():
    return build_weak_order(3)


@pytest.fixture(scope="session")
def s5():
    return build_weak_order(4)
