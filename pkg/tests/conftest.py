import pytest

from gridfreq import GridSpec, RocofLimits, generate_grid, run_sweep


@pytest.fixture(scope="session")
def default_grid():
    return generate_grid(GridSpec())


@pytest.fixture(scope="session")
def sweep_rows(default_grid):
    """Full default-grid sweep, shared by the sweep and acceptance tests."""
    return run_sweep(default_grid, RocofLimits(), workers=2)
