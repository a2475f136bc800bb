import pytest

from qramprep.cli import example_matrix


@pytest.fixture
def example():
    """The 2x4 complex demo matrix (K=8, k=3, squared norm 33)."""
    return example_matrix()
