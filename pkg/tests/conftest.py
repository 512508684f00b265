from pathlib import Path

import pytest
from hypothesis import settings

from qstat import synthetic

settings.register_profile("qstat", max_examples=60, deadline=None)
settings.load_profile("qstat")

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def surrogate_groups():
    return synthetic.surrogate_groups()


@pytest.fixture(scope="session")
def surrogate_csv():
    return DATA / "three_groups.csv"
