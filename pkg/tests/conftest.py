import math

import pytest
from click.testing import CliRunner

from renyi_spectrum.critical import u_E
from renyi_spectrum.phase_solver import (
    PhasePoint,
    solve_entangled,
    solve_separable,
    solve_typical,
)


@pytest.fixture
def q2_entangled_solution_fixture():
    return solve_entangled(PhasePoint(q=2.0, u=0.1))


@pytest.fixture
def marchenko_pastur_solution_fixture():
    return solve_typical(PhasePoint(q=2.0, u=u_E(2.0)))


@pytest.fixture
def q2_typical_solution_fixture():
    return solve_typical(PhasePoint(q=2.0, u=0.4))


@pytest.fixture
def q2_separable_solution_fixture():
    return solve_separable(PhasePoint(q=2.0, u=math.log(4.0), N=100))


@pytest.fixture
def cli_runner_fixture(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1546300800")
    monkeypatch.setenv("RENYI_SPECTRUM_SHOW_PROGRESS", "0")
    return CliRunner()
