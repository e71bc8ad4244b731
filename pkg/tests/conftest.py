import pytest

from robinsphere.capbody import corpus_bodies, octant_fixture


@pytest.fixture(scope="session")
def octant():
    return octant_fixture()


@pytest.fixture(scope="session")
def small_corpus():
    """Six random bodies, k = 3..8 (seeds 1..6)."""
    return corpus_bodies(6)
