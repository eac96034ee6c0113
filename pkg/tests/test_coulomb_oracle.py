import json
import math

import numpy as np
import pytest

from renyi_spectrum.coulomb_oracle import (
    CoulombGasState,
    MetropolisCheckpoint,
    MetropolisSampler,
    OracleConfig,
    chain_mean_u,
    compare,
    metropolis_sample,
    minimize_potential,
    _initial_configuration,
    _initial_multipliers,
    _NewtonSystem,
    renyi_deficit,
)
from renyi_spectrum.errors import DomainError, NumericalError
from renyi_spectrum.phase_solver import (
    PhasePoint,
    evaporated_eigenvalue,
    multipliers,
    solve,
    von_neumann_u,
)
from renyi_spectrum.spectrum import quantiles


@pytest.mark.parametrize(
    "given_kwargs",
    [
        {"N": 4, "q": 2.0, "u": 0.1},
        {"N": 16.5, "q": 2.0, "u": 0.1},
        {"N": 16, "q": 0.0, "u": 0.1},
        {"N": 16, "q": 2.0},
        {"N": 16, "q": 2.0, "u": 0.1, "beta": 1.0},
        {"N": 16, "q": 2.0, "u": 0.1, "max_iterations": 0},
        {"N": 16, "q": 2.0, "u": 0.1, "step_tolerance": 0.0},
        {"N": 16, "q": 2.0, "u": 0.1, "seed": -1},
    ],
)
def test_oracle_config_validation(given_kwargs):
    with pytest.raises(DomainError):
        OracleConfig(**given_kwargs)


@pytest.mark.parametrize(
    "given_eigenvalues,given_q,expected_value",
    [
        (np.full(8, 1.0 / 8.0), 2.0, 0.0),
        (np.full(8, 1.0 / 8.0), 1.0, 0.0),
        (np.array([1.0] + [0.0] * 7), 3.0, math.log(8.0)),
        (np.array([0.5, 0.5, 0.0, 0.0]), 1.0, math.log(2.0)),
    ],
)
def test_renyi_deficit(given_eigenvalues, given_q, expected_value):
    assert renyi_deficit(given_eigenvalues, given_q) == pytest.approx(
        expected_value, abs=1e-12
    )


def test_minimize_potential_entangled_small():
    cfg = OracleConfig(N=16, q=2.0, u=0.1)
    state = minimize_potential(cfg)
    assert state.N == 16
    assert state.eigenvalues.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(state.eigenvalues) > 0)
    assert state.energy == pytest.approx(0.1, abs=1e-8)
    assert state.residual < cfg.step_tolerance
    assert not state.pinned


def test_minimize_potential_ignores_start_order():
    cfg = OracleConfig(N=16, q=2.0, u=0.1)
    reference = minimize_potential(cfg)
    rng = np.random.default_rng(3)
    start = reference.scaled * (1.0 + 1e-3 * rng.standard_normal(16))
    state = minimize_potential(cfg, initial=rng.permutation(start))
    np.testing.assert_allclose(state.eigenvalues, reference.eigenvalues, rtol=0.0, atol=1e-8)


def test_oracle_energy_is_recomputable():
    state = minimize_potential(OracleConfig(N=16, q=3.0, u=0.2))
    assert state.energy == pytest.approx(renyi_deficit(state.eigenvalues, 3.0), abs=1e-12)
    assert state.energy == pytest.approx(0.2, abs=1e-9)
    (sampled,) = metropolis_sample(
        OracleConfig(N=8, q=2.0, beta=1.0, seed=5), sweeps=8, thinning=8, burn_in=2
    )
    assert sampled.energy == pytest.approx(
        renyi_deficit(sampled.eigenvalues, 2.0), abs=1e-12
    )


def test_evaporated_block_gives_the_full_newton_step():
    cfg = OracleConfig(N=16, q=2.0, u=1.5)
    x = np.sort(_initial_configuration(cfg))
    beta, xi = _initial_multipliers(x, cfg.q)
    full = _NewtonSystem(cfg.q, cfg.u)
    block = _NewtonSystem(cfg.q, cfg.u, evaporated=True)
    values = full.residual(x, beta, xi, False)
    matrix = full.jacobian(x, beta, xi, False)
    expected = full.direction(values, matrix)
    np.testing.assert_allclose(
        block.direction(values, matrix),
        expected,
        rtol=1e-6,
        atol=1e-8 * np.abs(expected).max(),
    )


@pytest.mark.parametrize(
    "given_cfg",
    [
        OracleConfig(N=16, q=2.0, beta=1.0),
        OracleConfig(N=16, q=2.0, u=math.log(16.0)),
        OracleConfig(N=16, q=2.0, u=0.0),
    ],
)
def test_minimize_potential_rejects_targets(given_cfg):
    with pytest.raises(DomainError):
        minimize_potential(given_cfg)


def _analytic_state(solution, size):
    levels = (np.arange(size) + 0.5) / size
    scaled = quantiles(solution, levels)
    return CoulombGasState(
        eigenvalues=scaled / scaled.sum(), xi=0.0, beta=0.0, energy=0.0, residual=0.0
    )


def test_compare_analytic_quantiles(q2_entangled_solution_fixture):
    solution = q2_entangled_solution_fixture
    comparison = compare(_analytic_state(solution, 512), solution)
    assert comparison.wasserstein1 < 0.01
    assert comparison.ks < 0.01
    assert comparison.u_gap < 0.01


def test_metropolis_sampler_needs_beta():
    with pytest.raises(DomainError):
        MetropolisSampler(OracleConfig(N=8, q=2.0, u=0.1))


def test_metropolis_sample_small_chain():
    states = metropolis_sample(
        OracleConfig(N=8, q=2.0, beta=1.0, seed=5), sweeps=16, thinning=8, burn_in=4
    )
    assert len(states) == 2
    for state in states:
        assert state.eigenvalues.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(state.eigenvalues >= 0)
        assert 0.0 <= state.acceptance <= 1.0
        assert state.beta == 1.0
    assert chain_mean_u(states) == pytest.approx(
        np.mean([s.energy for s in states]), abs=1e-15
    )


def test_metropolis_run_reports_progress():
    sampler = MetropolisSampler(OracleConfig(N=8, q=1.0, beta=2.0, seed=9))
    sampler.burn_in(2)
    seen = []
    sampler.run(5, thinning=5, on_sweep=seen.append)
    assert seen == [1, 2, 3, 4, 5]
    assert sampler.sweeps_done == 7


def test_metropolis_checkpoint_resumes_identically():
    cfg = OracleConfig(N=8, q=2.0, beta=1.5, seed=42)
    original = MetropolisSampler(cfg)
    original.burn_in(6)
    payload = json.loads(json.dumps(original.checkpoint().to_dict()))
    resumed = MetropolisSampler(cfg, checkpoint=MetropolisCheckpoint.from_dict(payload))

    expected = original.run(16, thinning=8)
    actual = resumed.run(16, thinning=8)
    assert len(actual) == len(expected) == 2
    for left, right in zip(expected, actual):
        assert np.array_equal(left.eigenvalues, right.eigenvalues)
    assert resumed.sweeps_done == original.sweeps_done == 22


def test_metropolis_checkpoint_must_match_configuration():
    sampler = MetropolisSampler(OracleConfig(N=8, q=2.0, beta=1.5, seed=42))
    with pytest.raises(DomainError):
        MetropolisSampler(OracleConfig(N=8, q=2.0, beta=2.5), checkpoint=sampler.checkpoint())


def test_metropolis_run_needs_sweeps():
    with pytest.raises(DomainError):
        MetropolisSampler(OracleConfig(N=8, q=2.0, beta=1.0)).run(0)


def test_chain_mean_u_needs_states():
    with pytest.raises(NumericalError):
        chain_mean_u([])


@pytest.mark.slow
def test_oracle_matches_analytic_entangled_solution():
    state = minimize_potential(OracleConfig(N=64, q=2.0, u=0.1))
    comparison = compare(state, solve(PhasePoint(q=2.0, u=0.1, N=64)))
    assert comparison.wasserstein1 < 0.05


@pytest.mark.slow
@pytest.mark.parametrize("given_u", [1.2, 1.5])
def test_oracle_evaporated_eigenvalue_tracks_finite_n_root(given_u):
    state = minimize_potential(OracleConfig(N=64, q=2.0, u=given_u))
    expected = evaporated_eigenvalue(64, 2.0, given_u)
    assert state.eigenvalues[-1] == pytest.approx(expected, abs=0.05)


@pytest.mark.slow
def test_oracle_evaporation_signature():
    gaps, errors = [], []
    for u in (0.9, 1.2, 1.5):
        scaled = minimize_potential(OracleConfig(N=64, q=2.0, u=u)).scaled
        expected = 64 * evaporated_eigenvalue(64, 2.0, u)
        gaps.append(scaled[-1] - scaled[-2])
        errors.append(abs(scaled[-1] - expected) / expected)
    assert gaps[0] < gaps[1] < gaps[2]
    # the sea's O(1) share of the purity is left out of the evaporation root
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 0.1


@pytest.mark.slow
def test_metropolis_at_zero_beta_is_typical():
    states = metropolis_sample(OracleConfig(N=64, q=2.0, beta=0.0), sweeps=64 * 40)
    assert chain_mean_u(states) == pytest.approx(math.log(2.0), rel=0.05)


@pytest.mark.slow
def test_oracle_distance_shrinks_with_N():
    distances = []
    for size in (32, 64, 128):
        state = minimize_potential(OracleConfig(N=size, q=2.0, u=0.1))
        solution = solve(PhasePoint(q=2.0, u=0.1, N=size))
        distances.append(compare(state, solution).wasserstein1)
    assert distances[0] > distances[1] > distances[2]


@pytest.mark.slow
def test_metropolis_von_neumann_thermometry():
    states = metropolis_sample(OracleConfig(N=64, q=1.0, beta=3.0), sweeps=64 * 40)
    assert chain_mean_u(states) == pytest.approx(von_neumann_u(3.0), rel=0.05)


@pytest.mark.slow
def test_oracle_multiplier_matches_analytic_beta():
    state = minimize_potential(OracleConfig(N=64, q=2.0, u=0.1))
    analytic_beta, _ = multipliers(solve(PhasePoint(q=2.0, u=0.1, N=64)))
    assert state.beta == pytest.approx(analytic_beta, rel=0.1)
