from __future__ import annotations

import random

import pytest

from loewner_lab.verify import random_table


@pytest.fixture
def rng() -> random.Random:
    return random.Random(1234)


@pytest.fixture
def exact_symbols(rng):
    return [random_table(rng, 20) for _ in range(10)]
