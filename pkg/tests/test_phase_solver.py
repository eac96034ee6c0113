import math

import numpy as np
import pytest

from renyi_spectrum.critical import u_C, u_E
from renyi_spectrum.errors import (
    DomainError,
    MissingParameterError,
    OutOfRangeError,
    WrongPhaseError,
)
from renyi_spectrum.phase_solver import (
    Phase,
    PhasePoint,
    classify,
    evaporated_eigenvalue,
    multipliers,
    solve,
    solve_entangled,
    solve_separable,
    solve_typical,
    von_neumann_beta,
    von_neumann_u,
)
from renyi_spectrum.spectrum import moment, sigma, u_of


@pytest.mark.parametrize(
    "given_point,expected_phase",
    [
        (PhasePoint(q=2.0, u=0.1), Phase.ENTANGLED),
        (PhasePoint(q=2.0, u=0.4), Phase.TYPICAL),
        (PhasePoint(q=2.0, u=1.0, N=100), Phase.SEPARABLE),
        (PhasePoint(q=2.0, u=math.log(1.25)), Phase.TYPICAL),
        (PhasePoint(q=1.0, u=0.5), Phase.TYPICAL),
    ],
)
def test_classify(given_point, expected_phase):
    assert classify(given_point) is expected_phase


def test_classify_needs_n_in_separable_phase():
    with pytest.raises(MissingParameterError):
        classify(PhasePoint(q=2.0, u=1.0))


@pytest.mark.parametrize(
    "given_kwargs,expected_error",
    [
        ({"q": 2.0, "u": 5.0, "N": 100}, OutOfRangeError),
        ({"q": 0.0, "u": 0.1}, DomainError),
        ({"q": 2.0, "u": -0.1}, DomainError),
        ({"q": 2.0, "u": 0.1, "N": 0}, DomainError),
    ],
)
def test_phase_point_validation(given_kwargs, expected_error):
    with pytest.raises(expected_error):
        PhasePoint(**given_kwargs)


def test_q2_entangled_closed_form(q2_entangled_solution_fixture):
    solution = q2_entangled_solution_fixture
    alpha = 0.5 / math.sqrt(math.expm1(0.1))
    assert solution.phase is Phase.ENTANGLED
    assert solution.support.alpha == pytest.approx(alpha, abs=1e-12)
    assert solution.support.delta == pytest.approx(1.0 / alpha, abs=1e-12)
    assert solution.A == pytest.approx(-2.0 * (alpha - 1.0), abs=1e-12)
    assert solution.B == 2.0
    assert solution.support.a == pytest.approx(0.35146, abs=1e-4)
    assert solution.support.b == pytest.approx(1.64862, abs=1e-4)
    assert solution.beta == pytest.approx(2.0 * math.exp(0.1) * alpha ** 2, abs=1e-10)
    assert solution.beta == pytest.approx(5.2541, abs=1e-3)
    assert solution.mu is None


@pytest.mark.parametrize("given_u", [0.05, 0.1, 0.2])
def test_general_path_matches_q2_closed_form(given_u):
    point = PhasePoint(q=2.0, u=given_u)
    general = solve_entangled(point, closed_form=False)
    exact = solve_entangled(point)
    assert general.support.alpha == pytest.approx(exact.support.alpha, abs=1e-8)
    assert general.support.delta == pytest.approx(exact.support.delta, abs=1e-8)
    assert general.A == pytest.approx(exact.A, abs=1e-8)
    assert general.B == pytest.approx(exact.B, abs=1e-8)
    support = exact.support
    lam = support.delta * (np.linspace(-0.99, 0.99, 41) + support.alpha)
    np.testing.assert_allclose(sigma(general, lam), sigma(exact, lam), rtol=0.0, atol=1e-8)


def test_q1_entangled_closed_form():
    beta = 0.5 * (2.0 + math.sqrt(3.0)) * (6.0 + math.sqrt(3.0))
    solution = solve_entangled(PhasePoint(q=1.0, u=von_neumann_u(beta)))
    assert solution.support.alpha == pytest.approx(2.0, abs=1e-8)
    assert solution.A == pytest.approx(
        (2.0 + math.sqrt(3.0)) * math.log(2.0 * (2.0 - math.sqrt(3.0))), abs=1e-8
    )
    assert solution.B == pytest.approx(2.0 + math.sqrt(3.0), abs=1e-8)
    assert solution.support.delta == pytest.approx(4.0 / (6.0 + math.sqrt(3.0)), abs=1e-8)
    assert solution.beta == pytest.approx(beta, rel=1e-8)


@pytest.mark.parametrize("given_q", [1.0 - 1e-4, 1.0 + 1e-4])
def test_general_path_near_q1_matches_closed_form(given_q):
    general = solve_entangled(PhasePoint(q=given_q, u=0.1))
    exact = solve_entangled(PhasePoint(q=1.0, u=0.1))
    assert general.support.alpha == pytest.approx(exact.support.alpha, abs=1e-3)
    assert general.A == pytest.approx(exact.A, abs=1e-3)
    assert general.B == pytest.approx(exact.B, abs=1e-3)
    assert general.support.delta == pytest.approx(exact.support.delta, abs=1e-3)


def test_typical_q2(q2_typical_solution_fixture):
    solution = q2_typical_solution_fixture
    expected_delta = 3.0 - math.sqrt(9.0 - 4.0 * math.exp(0.4))
    assert solution.phase is Phase.TYPICAL
    assert solution.support.alpha == 1.0
    assert solution.support.a == 0.0
    assert solution.support.delta == pytest.approx(expected_delta, abs=1e-10)
    assert solution.support.delta == pytest.approx(1.25853, abs=1e-5)
    assert solution.beta > 0


def test_marchenko_pastur_point(marchenko_pastur_solution_fixture):
    solution = marchenko_pastur_solution_fixture
    assert solution.support.delta == pytest.approx(2.0, abs=1e-10)
    assert solution.A == pytest.approx(1.0, abs=1e-10)
    assert solution.B == pytest.approx(0.0, abs=1e-10)
    assert solution.beta == pytest.approx(0.0, abs=1e-10)
    assert solution.boundary


@pytest.mark.parametrize("given_q", [1.0, 2.0, 5.0, 10.0])
def test_phases_agree_on_concentration_line(given_q):
    critical_u = u_C(given_q)
    typical = solve_typical(PhasePoint(q=given_q, u=critical_u))
    entangled = solve_entangled(PhasePoint(q=given_q, u=critical_u * (1.0 - 1e-9)))
    assert typical.boundary
    assert entangled.support.a == pytest.approx(0.0, abs=1e-3)
    assert typical.A == pytest.approx(entangled.A, abs=1e-3)
    assert typical.B == pytest.approx(entangled.B, abs=1e-3)
    assert typical.support.delta == pytest.approx(entangled.support.delta, abs=1e-3)


def test_beta_decreases_through_both_phases():
    betas = [
        solve(PhasePoint(q=2.0, u=u)).beta
        for u in np.linspace(0.02, u_E(2.0), 15)
    ]
    assert all(np.diff(betas) < 0)
    assert all(beta > 0 for beta in betas[:-1])
    assert betas[-1] == pytest.approx(0.0, abs=1e-8)


def test_von_neumann_beta_on_concentration_line():
    assert von_neumann_beta(u_C(1.0)) == pytest.approx(1.5, abs=1e-8)
    assert solve_typical(PhasePoint(q=1.0, u=u_C(1.0))).beta == pytest.approx(1.5, abs=1e-8)


@pytest.mark.parametrize(
    "given_call,expected_error",
    [
        (lambda: von_neumann_u(1.0), DomainError),
        (lambda: von_neumann_beta(0.3), WrongPhaseError),
        (lambda: solve_entangled(PhasePoint(q=2.0, u=0.0)), DomainError),
        (lambda: solve_entangled(PhasePoint(q=2.0, u=0.3)), WrongPhaseError),
        (lambda: solve_typical(PhasePoint(q=2.0, u=0.1)), WrongPhaseError),
        (lambda: solve_typical(PhasePoint(q=2.0, u=1.0, N=100)), WrongPhaseError),
        (lambda: solve_separable(PhasePoint(q=2.0, u=1.0)), MissingParameterError),
        (lambda: solve_separable(PhasePoint(q=2.0, u=0.5, N=100)), WrongPhaseError),
    ],
)
def test_solver_errors(given_call, expected_error):
    with pytest.raises(expected_error):
        given_call()


@pytest.mark.parametrize(
    "given_n,given_u,expected_mu",
    [
        (100, math.log(4.0), (1.0 + math.sqrt(1201.0)) / 200.0),
        (100, math.log(100.0), 1.0),
        (10_000, math.log(4.0), (1.0 + math.sqrt(120_001.0)) / 20_000.0),
    ],
)
def test_evaporated_eigenvalue_q2(given_n, given_u, expected_mu):
    assert evaporated_eigenvalue(given_n, 2.0, given_u) == pytest.approx(
        expected_mu, abs=1e-10
    )


def test_evaporated_eigenvalue_q1_limit():
    mu = evaporated_eigenvalue(100, 1.0, 2.0)
    assert mu * math.log(100 * mu) == pytest.approx(2.0, abs=1e-8)


def test_separable_solution(q2_separable_solution_fixture):
    solution = q2_separable_solution_fixture
    mu = (1.0 + math.sqrt(1201.0)) / 200.0
    assert solution.phase is Phase.SEPARABLE
    assert solution.mu == pytest.approx(0.178277, abs=1e-6)
    assert solution.xi == pytest.approx(1.0 / (1.0 - mu), abs=1e-10)
    assert solution.beta < 0
    assert solution.support.b == pytest.approx(4.0 * (1.0 - mu) * 100 / 99, abs=1e-10)
    assert multipliers(solution) == (solution.beta, solution.xi)


@pytest.mark.parametrize(
    "given_q,given_u",
    [
        (2.5, 0.1),
        (0.8, 0.1),
        (3.0, 0.15),
        (1.0, 0.1),
        (2.0, 0.5),
        (5.0, 0.6),
        (1.0, 0.4),
        (7.48, 0.1),
        (10.0, 0.05),
    ],
)
def test_solution_round_trip(given_q, given_u):
    solution = solve(PhasePoint(q=given_q, u=given_u))
    assert moment(solution, 0.0) == pytest.approx(1.0, abs=1e-6)
    assert moment(solution, 1.0) == pytest.approx(1.0, abs=1e-6)
    assert u_of(solution, given_q) == pytest.approx(given_u, abs=1e-6)


@pytest.mark.parametrize("given_q", [6.0, 7.0, 8.0, 9.0, 10.0])
@pytest.mark.parametrize("given_fraction", [0.05, 0.3, 0.9])
def test_large_orders_solve_below_concentration_line(given_q, given_fraction):
    solution = solve(PhasePoint(q=given_q, u=given_fraction * u_C(given_q)))
    assert solution.phase is Phase.ENTANGLED
    assert solution.support.a > 0
