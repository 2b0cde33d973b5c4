# coding=utf-8
"""Pytest customizations and fixtures for the statistical sweeps."""
import pytest

from legproj import cli
from legproj.enums import Mode
from legproj.tests.utils import SWEEP_MAX_M
from legproj.utils import get_experiment_settings


@pytest.fixture(scope="session")
def base_seed():
    """Return the experiment seed, taken from the configuration file if set."""
    return int(get_experiment_settings()["seed"])


@pytest.fixture(scope="session")
def sweep_seeds(base_seed):
    """Return ten distinct seeds for repeated single-run checks."""
    return [base_seed + offset for offset in range(10)]


@pytest.fixture(scope="session")
def regenerated_grids(base_seed):
    """Run the desk-scale density grids of both reference families once.

    Every cell is run twice. Cells above ``m = 14`` are left out.
    """
    grids = {}
    for nu1, nu2 in ((1, 2), (3, 2)):
        config = cli.build_config(
            Mode.TABLE,
            nu1,
            nu2,
            m_list=list(range(SWEEP_MAX_M + 1)),
            seed=base_seed,
            replicates=2,
        )
        grids[(nu1, nu2)] = (config, cli.cmd_table(config))
    return grids
