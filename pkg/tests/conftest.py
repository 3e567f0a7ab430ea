import logging

import pytest
from weilforge.core.logging import configure_logging
from weilforge.services.connection_solver import solve
from weilforge.services.examples import builtin_example
from weilforge.services.kahler import levi_civita
from weilforge.services.polarization_solver import solve_polarization

ORDER = 4


@pytest.fixture(scope="session", autouse=True)
def quiet_logging():
    configure_logging("WARNING")
    yield
    logging.getLogger().setLevel(logging.WARNING)


@pytest.fixture(scope="session")
def fs_metric():
    return builtin_example("fubini-study", 1, ORDER + 1)


@pytest.fixture(scope="session")
def fs_gamma(fs_metric):
    return levi_civita(fs_metric)


@pytest.fixture(scope="session")
def fs_solution(fs_gamma):
    return solve(fs_gamma, ORDER)


@pytest.fixture(scope="session")
def fs_polarization(fs_solution, fs_metric):
    return solve_polarization(fs_solution, fs_metric)


@pytest.fixture(scope="session")
def flat_metric():
    return builtin_example("flat", 1, ORDER + 1)


@pytest.fixture(scope="session")
def flat_solution(flat_metric):
    return solve(levi_civita(flat_metric), ORDER)


@pytest.fixture(scope="session")
def flat_polarization(flat_solution, flat_metric):
    return solve_polarization(flat_solution, flat_metric)


@pytest.fixture(scope="session")
def poincare_solution():
    return solve(levi_civita(builtin_example("poincare", 1, ORDER + 1)), ORDER)


@pytest.fixture(scope="session")
def flat_gamma_2d():
    return levi_civita(builtin_example("flat", 2, 3))
