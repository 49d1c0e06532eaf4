import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cometforensics import dataset_tail_factors
from cometforensics.fixtures import (
    reconstructed_a_cell_values,
    reconstructed_sham_dataset,
    sham_population,
)


@pytest.fixture(scope="session")
def sham_dataset():
    return reconstructed_sham_dataset()


@pytest.fixture(scope="session")
def sham_summaries(sham_dataset):
    return dataset_tail_factors(sham_dataset)


@pytest.fixture(scope="session")
def a_cell_values():
    return reconstructed_a_cell_values()


@pytest.fixture(scope="session")
def population():
    return sham_population()
