"""This module is the finite-N ground truth for the analytic solutions.

Two routes are offered. `minimize_potential` solves the saddle-point system of
the constrained Coulomb gas by damped Newton iteration with (beta, xi) among
the unknowns. `metropolis_sample` samples the Gibbs weight
exp(-beta N^2 E) |Vandermonde|^2 on the simplex at a fixed beta.

Everything is written in the scaled eigenvalues x = N lambda, whose mean is
one, so every term of the equations is O(1).
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from scipy import linalg, special, stats

from renyi_spectrum.constants import (
    DEFAULT_SEED,
    METROPOLIS_ACCEPTANCE_BOUNDS,
    METROPOLIS_BURN_IN_FACTOR,
    METROPOLIS_TARGET_ACCEPTANCE,
    METROPOLIS_THINNING_FACTOR,
    ORACLE_COLLISION_SPACING,
    ORACLE_CONSTRAINT_TOLERANCE,
    ORACLE_JITTER,
    ORACLE_MAX_ITERATIONS,
    ORACLE_MAX_RESTARTS,
    ORACLE_MIN_N,
    ORACLE_STEP_TOLERANCE,
    Q_MIN_EXCLUSIVE,
)
from renyi_spectrum.errors import DomainError, NumericalError, OracleConvergenceError
from renyi_spectrum.haar_sampler import (
    make_generator,
    marchenko_pastur_quantiles,
    scaled_deficit,
)
from renyi_spectrum.phase_solver import (
    Phase,
    PhasePoint,
    SpectrumSolution,
    classify,
    evaporated_eigenvalue,
)
from renyi_spectrum.spectrum import cdf, quantiles, u_of

logger = logging.getLogger(__name__)

_COMPARISON_QUANTILES = 4096
_BACKTRACK_STEPS = 40
_SUFFICIENT_DECREASE = 1e-4
_FRACTION_TO_BOUNDARY = 0.9


@dataclass(frozen=True)
class OracleConfig:
    """Finite-N problem definition; exactly one of `u` and `beta` is the target"""

    N: int
    q: float
    u: Optional[float] = None
    beta: Optional[float] = None
    max_iterations: int = ORACLE_MAX_ITERATIONS
    step_tolerance: float = ORACLE_STEP_TOLERANCE
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if int(self.N) != self.N or self.N < ORACLE_MIN_N:
            raise DomainError(
                f"the oracle needs an integer N >= {ORACLE_MIN_N}", {"N": self.N}
            )
        if not self.q > 0:
            raise DomainError("the Renyi order q must be positive", {"q": self.q})
        if (self.u is None) == (self.beta is None):
            raise DomainError(
                "exactly one of the targets u and beta must be given",
                {"u": self.u, "beta": self.beta},
            )
        if self.max_iterations < 1 or not self.step_tolerance > 0:
            raise DomainError(
                "iteration count and tolerance must be positive",
                {
                    "max_iterations": self.max_iterations,
                    "step_tolerance": self.step_tolerance,
                },
            )
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise DomainError("the seed must be a 64-bit unsigned integer", {"seed": self.seed})


@dataclass(frozen=True, eq=False)
class CoulombGasState:
    """A configuration of the gas, sorted ascending and summing to one"""

    eigenvalues: np.ndarray
    xi: float
    beta: float
    energy: float
    residual: float
    pinned: bool = False
    iterations: int = 0
    acceptance: Optional[float] = None

    @property
    def N(self) -> int:
        return len(self.eigenvalues)

    @property
    def scaled(self) -> np.ndarray:
        return self.N * self.eigenvalues


class Comparison(NamedTuple):
    wasserstein1: float
    ks: float
    u_gap: float


def renyi_deficit(eigenvalues: np.ndarray, q: float) -> float:
    """E(lambda) = ln N - S_q(lambda) of a point of the simplex"""
    lam = np.asarray(eigenvalues, dtype=float)
    return scaled_deficit(len(lam) * lam, q)


def _coulomb(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(2/N) sum_k 1/(x_k - x_j) and the matrix of inverse gaps"""
    n = len(x)
    gaps = x[None, :] - x[:, None]
    np.fill_diagonal(gaps, np.inf)
    inverse = 1.0 / gaps
    return 2.0 / n * inverse.sum(axis=1), inverse


def _entropy_field(x: np.ndarray, q: float):
    """(g, g', D, Phi) with g = (q x^(q-1) - 1)/(q - 1) and Phi = ln D/(q - 1)"""
    n = len(x)
    if q == 1:
        with np.errstate(divide="ignore"):
            g = 1.0 + np.log(x)
            slope = 1.0 / x
        return g, slope, 1.0, float(np.mean(special.xlogy(x, x)))
    power = x ** (q - 1)
    g = (q * power - 1.0) / (q - 1)
    with np.errstate(divide="ignore"):
        slope = np.where(x > 0, q * x ** (q - 2), 0.0)
    denominator = float(np.mean(x * power) - x.sum() / n + 1.0)
    if denominator <= 0:
        return g, slope, denominator, math.nan
    return g, slope, denominator, math.log(denominator) / (q - 1)


def _gradient(x: np.ndarray, beta: float, xi: float, q: float) -> np.ndarray:
    """dV/dlambda_j in the scaled normalisation of the saddle-point equations"""
    repulsion, _ = _coulomb(x)
    g, _, denominator, _ = _entropy_field(x, q)
    return repulsion + beta * g / denominator + xi


class _NewtonSystem:
    """Residual and Jacobian of the saddle-point system.

    Unknowns are (x_1..x_N, beta, xi). When the smallest eigenvalue sits on the
    hard wall x = 0 its equation is replaced by x_1 = 0. In the separable phase
    the evaporated eigenvalue x_N is O(N) against an O(1) sea, so it is solved
    together with (beta, xi) as a separate block.
    """

    def __init__(self, q: float, u: float, evaporated: bool = False):
        self.q = q
        self.u = u
        self.evaporated = evaporated

    def residual(
        self, x: np.ndarray, beta: float, xi: float, pinned: bool
    ) -> np.ndarray:
        n = len(x)
        repulsion, _ = _coulomb(x)
        g, _, denominator, phi = _entropy_field(x, self.q)
        values = np.empty(n + 2)
        values[:n] = repulsion + beta * g / denominator + xi
        values[n] = phi - self.u
        values[n + 1] = x.mean() - 1.0
        if pinned:
            values[0] = x[0]
        return values

    def jacobian(
        self, x: np.ndarray, beta: float, xi: float, pinned: bool
    ) -> np.ndarray:
        n = len(x)
        _, inverse = _coulomb(x)
        g, slope, denominator, _ = _entropy_field(x, self.q)
        squared = inverse ** 2
        matrix = np.zeros((n + 2, n + 2))
        block = -2.0 / n * squared
        block[np.diag_indices(n)] = 2.0 / n * squared.sum(axis=1)
        if self.q != 1:
            d_denominator = (self.q - 1) * g / n
            block -= beta * np.outer(g, d_denominator) / denominator ** 2
        block[np.diag_indices(n)] += beta * slope / denominator
        matrix[:n, :n] = block
        matrix[:n, n] = g / denominator
        matrix[:n, n + 1] = 1.0
        matrix[n, :n] = g / (n * denominator)
        matrix[n + 1, :n] = 1.0 / n
        if pinned:
            matrix[0, :] = 0.0
            matrix[0, 0] = 1.0
        return matrix

    def violation(
        self, x: np.ndarray, beta: float, xi: float, pinned: bool
    ) -> Tuple[float, float]:
        """(saddle residual, constraint residual); a pinned wall counts only if it pulls"""
        values = self.residual(x, beta, xi, pinned)
        n = len(x)
        saddle = values[:n].copy()
        if pinned:
            saddle[0] = max(0.0, -_gradient(x, beta, xi, self.q)[0])
        return float(np.max(np.abs(saddle))), float(np.max(np.abs(values[n:])))

    def direction(self, values: np.ndarray, matrix: np.ndarray) -> np.ndarray:
        """Newton step for the residual `values` and Jacobian `matrix`"""
        if self.evaporated:
            try:
                return _block_direction(values, matrix)
            except (linalg.LinAlgError, ValueError):
                logger.debug("evaporated block is singular, solving the full system")
        return _scaled_direction(values, matrix)


def _column_scaled_solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    scale = 1.0 / np.maximum(np.abs(matrix).max(axis=0), np.finfo(float).tiny)
    if rhs.ndim > 1:
        return linalg.solve(matrix * scale, rhs) * scale[:, None]
    return linalg.solve(matrix * scale, rhs) * scale


def _scaled_direction(values: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    try:
        return _column_scaled_solve(matrix, -values)
    except (linalg.LinAlgError, ValueError):
        scale = 1.0 / np.maximum(np.abs(matrix).max(axis=0), np.finfo(float).tiny)
        direction, *_ = linalg.lstsq(matrix * scale, -values)
        return direction * scale


def _block_direction(values: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Newton step with (x_N, beta, xi) eliminated through their Schur complement"""
    n = len(values) - 2
    sea = np.arange(n - 1)
    outer = np.array([n - 1, n, n + 1])
    coupling = matrix[np.ix_(sea, outer)]
    back = matrix[np.ix_(outer, sea)]
    solved = _column_scaled_solve(
        matrix[np.ix_(sea, sea)], np.column_stack([-values[sea], coupling])
    )
    sea_step, sea_coupling = solved[:, 0], solved[:, 1:]
    schur = matrix[np.ix_(outer, outer)] - back @ sea_coupling
    outer_step = _column_scaled_solve(schur, -values[outer] - back @ sea_step)
    direction = np.empty_like(values)
    direction[sea] = sea_step - sea_coupling @ outer_step
    direction[outer] = outer_step
    if not np.all(np.isfinite(direction)):
        raise linalg.LinAlgError("non-finite block Newton step")
    return direction


def _initial_multipliers(x: np.ndarray, q: float) -> Tuple[float, float]:
    """Least-squares (beta, xi) for a fixed configuration"""
    repulsion, _ = _coulomb(x)
    g, _, denominator, _ = _entropy_field(x, q)
    design = np.column_stack([g / denominator, np.ones_like(x)])
    solution, *_ = linalg.lstsq(design, -repulsion)
    return float(solution[0]), float(solution[1])


def _affine_deficit(base: np.ndarray, scale: float, q: float) -> float:
    return scaled_deficit(1.0 + scale * (base - 1.0), q)


def _target_phase(cfg: OracleConfig) -> Phase:
    if cfg.q > Q_MIN_EXCLUSIVE:
        return classify(PhasePoint(q=cfg.q, u=cfg.u, N=cfg.N))
    return Phase.ENTANGLED


def _initial_configuration(cfg: OracleConfig) -> np.ndarray:
    """MP configuration deformed toward the target.

    Entangled and typical targets shrink or stretch the MP quantiles about
    their mean until the deficit matches. Separable targets place the
    largest eigenvalue at N mu and rescale the sea under it.
    """
    n, q, u = cfg.N, cfg.q, cfg.u
    if _target_phase(cfg) is Phase.SEPARABLE:
        mu = evaporated_eigenvalue(n, q, u)
        sea = marchenko_pastur_quantiles(n - 1) * (1.0 - mu) * n / (n - 1)
        return np.append(sea, n * mu)

    base = marchenko_pastur_quantiles(n)
    largest = _FRACTION_TO_BOUNDARY / (1.0 - base.min())
    low, high = 1e-8, largest
    if _affine_deficit(base, high, q) <= u:
        return 1.0 + high * (base - 1.0)
    for _ in range(200):
        middle = 0.5 * (low + high)
        if _affine_deficit(base, middle, q) < u:
            low = middle
        else:
            high = middle
    return 1.0 + 0.5 * (low + high) * (base - 1.0)


def _step_length(
    x: np.ndarray, dx: np.ndarray, q: float, pinned: bool
) -> Tuple[float, bool]:
    """Largest step keeping the order strict, plus whether it lands on the wall"""
    length = 1.0
    closing = np.diff(dx) < 0
    if np.any(closing):
        gaps = np.diff(x)[closing]
        length = min(
            length, _FRACTION_TO_BOUNDARY * float(np.min(gaps / -np.diff(dx)[closing]))
        )
    if not pinned and dx[0] < 0:
        to_wall = x[0] / -dx[0]
        if q > 1 and to_wall <= length:
            return to_wall, True
        length = min(length, _FRACTION_TO_BOUNDARY * to_wall)
    return length, False


def _newton_solve(
    cfg: OracleConfig, start: np.ndarray, history: List[float], evaporated: bool
) -> CoulombGasState:
    system = _NewtonSystem(cfg.q, cfg.u, evaporated)
    n = cfg.N
    x = np.sort(start)
    x *= n / x.sum()
    beta, xi = _initial_multipliers(x, cfg.q)
    pinned = False

    for iteration in range(1, cfg.max_iterations + 1):
        saddle, constraint = system.violation(x, beta, xi, pinned)
        history.append(max(saddle, constraint))
        if pinned and _gradient(x, beta, xi, cfg.q)[0] < -cfg.step_tolerance:
            logger.debug("releasing the wall eigenvalue at iteration %d", iteration)
            pinned = False
            x[0] = 0.5 * x[1]
            continue
        if saddle < cfg.step_tolerance and constraint < ORACLE_CONSTRAINT_TOLERANCE:
            x = x * (n / x.sum())
            return CoulombGasState(
                eigenvalues=x / n,
                xi=xi,
                beta=beta,
                energy=renyi_deficit(x / n, cfg.q),
                residual=saddle,
                pinned=pinned,
                iterations=iteration,
            )

        values = system.residual(x, beta, xi, pinned)
        matrix = system.jacobian(x, beta, xi, pinned)
        direction = system.direction(values, matrix)

        dx = direction[:n]
        length, hits_wall = _step_length(x, dx, cfg.q, pinned)
        merit = float(np.linalg.norm(values))
        for _ in range(_BACKTRACK_STEPS):
            trial = x + length * dx
            trial_pinned = pinned or hits_wall
            if trial_pinned:
                trial[0] = 0.0
            trial_beta = beta + length * direction[n]
            trial_xi = xi + length * direction[n + 1]
            trial_values = system.residual(trial, trial_beta, trial_xi, trial_pinned)
            trial_merit = float(np.linalg.norm(trial_values))
            if np.isfinite(trial_merit) and trial_merit <= (
                1.0 - _SUFFICIENT_DECREASE * length
            ) * merit:
                break
            length *= 0.5
            hits_wall = False
        x, beta, xi, pinned = trial, trial_beta, trial_xi, trial_pinned

        if np.min(np.diff(x)) < ORACLE_COLLISION_SPACING:
            raise _Collision(iteration)

    raise OracleConvergenceError(
        "saddle-point iteration did not converge",
        residual_history=history,
        N=n,
        q=cfg.q,
        u=cfg.u,
    )


class _Collision(Exception):
    def __init__(self, iteration: int):
        super().__init__(iteration)
        self.iteration = iteration


def minimize_potential(
    cfg: OracleConfig, initial: Optional[np.ndarray] = None
) -> CoulombGasState:
    """Solve the finite-N saddle-point equations at a target entropy deficit.

    Args:
        cfg: Problem definition with `u` set.
        initial: Optional starting scaled eigenvalues N lambda, in any order.

    Returns:
        The converged state, eigenvalues sorted ascending.
    """
    if cfg.u is None:
        raise DomainError("minimize_potential needs a target u", {"beta": cfg.beta})
    if not 0 < cfg.u < math.log(cfg.N):
        raise DomainError(
            "the target u must lie in (0, ln N)", {"u": cfg.u, "ln_N": math.log(cfg.N)}
        )
    start = (
        _initial_configuration(cfg)
        if initial is None
        else np.asarray(initial, dtype=float)
    )
    evaporated = _target_phase(cfg) is Phase.SEPARABLE
    generator = make_generator(cfg.seed)
    history: List[float] = []
    for attempt in range(ORACLE_MAX_RESTARTS + 1):
        try:
            state = _newton_solve(cfg, start, history, evaporated)
            logger.debug(
                "oracle converged in %d iterations, residual %.3e",
                state.iterations,
                state.residual,
            )
            return state
        except _Collision as collision:
            logger.warning(
                "eigenvalue collision at iteration %d, restarting with jitter (%d/%d)",
                collision.iteration,
                attempt + 1,
                ORACLE_MAX_RESTARTS,
            )
            start = np.abs(
                start * (1.0 + ORACLE_JITTER * generator.standard_normal(len(start)))
            )
    raise OracleConvergenceError(
        "eigenvalues collided after every restart",
        residual_history=history,
        restarts=ORACLE_MAX_RESTARTS,
    )


@dataclass
class MetropolisCheckpoint:
    """Everything needed to continue a chain bit-for-bit"""

    N: int
    q: float
    beta: float
    seed: int
    scaled: List[float]
    step: float
    sweeps_done: int
    burned_in: bool
    rng_state: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "N": self.N,
            "q": self.q,
            "beta": self.beta,
            "seed": self.seed,
            "scaled": [float(v) for v in self.scaled],
            "step": self.step,
            "sweeps_done": self.sweeps_done,
            "burned_in": self.burned_in,
            "rng_state": _plain(self.rng_state),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "MetropolisCheckpoint":
        return cls(**payload)


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, np.ndarray):
        return [int(v) for v in value.tolist()]
    if isinstance(value, np.integer):
        return int(value)
    return value


def _restore_rng_state(state: Dict[str, Any]) -> Dict[str, Any]:
    restored = dict(state)
    restored["state"] = {
        key: np.asarray(value, dtype=np.uint64)
        for key, value in state["state"].items()
    }
    restored["buffer"] = np.asarray(state["buffer"], dtype=np.uint64)
    return restored


class MetropolisSampler:
    """Pairwise mass-exchange chain on the simplex.

    A move adds eps to x_i and removes it from x_j, so the sum is exact and the
    proposal is symmetric. The step is tuned toward the target acceptance
    during burn-in only, which keeps the production chain reversible.
    """

    def __init__(self, cfg: OracleConfig, checkpoint: Optional[MetropolisCheckpoint] = None):
        if cfg.beta is None:
            raise DomainError("metropolis sampling needs a target beta", {"u": cfg.u})
        self.cfg = cfg
        self.generator = make_generator(cfg.seed)
        if checkpoint is None:
            self.x = marchenko_pastur_quantiles(cfg.N)
            self.step = 0.5
            self.sweeps_done = 0
            self.burned_in = False
        else:
            if (checkpoint.N, checkpoint.q, checkpoint.beta) != (cfg.N, cfg.q, cfg.beta):
                raise DomainError(
                    "checkpoint belongs to another configuration",
                    {"checkpoint": [checkpoint.N, checkpoint.q, checkpoint.beta]},
                )
            self.x = np.asarray(checkpoint.scaled, dtype=float)
            self.step = checkpoint.step
            self.sweeps_done = checkpoint.sweeps_done
            self.burned_in = checkpoint.burned_in
            self.generator.bit_generator.state = _restore_rng_state(checkpoint.rng_state)
        self._refresh()

    def _refresh(self):
        q = self.cfg.q
        if q == 1:
            self._power_sum = float(np.sum(special.xlogy(self.x, self.x)))
        else:
            self._power_sum = float(np.sum(self.x ** q))

    def _energy(self, power_sum: float) -> float:
        n, q = self.cfg.N, self.cfg.q
        if q == 1:
            return power_sum / n
        return math.log(power_sum / n) / (q - 1)

    def _power(self, value: float) -> float:
        if self.cfg.q == 1:
            return float(special.xlogy(value, value))
        return value ** self.cfg.q

    def _propose(self) -> bool:
        n = self.cfg.N
        x = self.x
        i = int(self.generator.integers(n))
        j = int(self.generator.integers(n - 1))
        j += j >= i
        eps = self.step * (2.0 * self.generator.random() - 1.0)
        new_i, new_j = x[i] + eps, x[j] - eps
        threshold = math.log(self.generator.random())
        if new_i < 0 or new_j < 0:
            return False

        with np.errstate(divide="ignore"):
            log_gaps = (
                np.log(np.abs(new_i - x))
                - np.log(np.abs(x[i] - x))
                + np.log(np.abs(new_j - x))
                - np.log(np.abs(x[j] - x))
            )
        log_gaps[[i, j]] = 0.0
        vandermonde = float(log_gaps.sum()) + math.log(abs(new_i - new_j)) - math.log(
            abs(x[i] - x[j])
        )

        power_sum = (
            self._power_sum
            - self._power(x[i])
            - self._power(x[j])
            + self._power(new_i)
            + self._power(new_j)
        )
        energy_change = self._energy(power_sum) - self._energy(self._power_sum)
        log_ratio = 2.0 * vandermonde - self.cfg.beta * n * n * energy_change
        if threshold < log_ratio:
            x[i], x[j] = new_i, new_j
            self._power_sum = power_sum
            return True
        return False

    def sweep(self) -> float:
        """N proposals; returns the acceptance fraction"""
        n = self.cfg.N
        accepted = sum(self._propose() for _ in range(n))
        self.sweeps_done += 1
        return accepted / n

    def burn_in(self, sweeps: Optional[int] = None):
        total = METROPOLIS_BURN_IN_FACTOR * self.cfg.N if sweeps is None else sweeps
        for _ in range(total):
            acceptance = self.sweep()
            self.step *= math.exp(acceptance - METROPOLIS_TARGET_ACCEPTANCE)
            self.step = min(self.step, float(self.cfg.N))
        self._refresh()
        self.burned_in = True
        logger.debug("burn-in finished, step %.3e", self.step)

    def state(self, acceptance: Optional[float] = None) -> CoulombGasState:
        """Current configuration with xi fitted and the fixed-beta saddle residual"""
        x = np.sort(self.x)
        beta = self.cfg.beta
        repulsion, _ = _coulomb(x)
        g, _, denominator, _ = _entropy_field(x, self.cfg.q)
        field_terms = repulsion + beta * g / denominator
        xi = -float(np.mean(field_terms[np.isfinite(field_terms)]))
        residual = float(np.max(np.abs(field_terms + xi)))
        lam = x / x.sum()
        return CoulombGasState(
            eigenvalues=lam,
            xi=xi,
            beta=beta,
            energy=renyi_deficit(lam, self.cfg.q),
            residual=residual if math.isfinite(residual) else float(np.finfo(float).max),
            acceptance=acceptance,
        )

    def run(
        self,
        sweeps: int,
        thinning: Optional[int] = None,
        on_sweep: Optional[Callable[[int], None]] = None,
    ) -> List[CoulombGasState]:
        """Production sweeps, recording one state every `thinning` sweeps"""
        if sweeps < 1:
            raise DomainError("at least one sweep is required", {"sweeps": sweeps})
        if not self.burned_in:
            self.burn_in()
        every = thinning or METROPOLIS_THINNING_FACTOR * self.cfg.N
        every = max(1, min(every, sweeps))
        states: List[CoulombGasState] = []
        accepted, window = 0.0, 0
        for index in range(1, sweeps + 1):
            accepted += self.sweep()
            window += 1
            if on_sweep is not None:
                on_sweep(index)
            if index % every == 0:
                self._refresh()
                states.append(self.state(acceptance=accepted / window))
        acceptance = accepted / window
        low, high = METROPOLIS_ACCEPTANCE_BOUNDS
        if not low <= acceptance <= high:
            logger.warning(
                "metropolis acceptance %.3f is outside [%.1f, %.1f]", acceptance, low, high
            )
        return states

    def checkpoint(self) -> MetropolisCheckpoint:
        return MetropolisCheckpoint(
            N=self.cfg.N,
            q=self.cfg.q,
            beta=self.cfg.beta,
            seed=self.cfg.seed,
            scaled=self.x.tolist(),
            step=self.step,
            sweeps_done=self.sweeps_done,
            burned_in=self.burned_in,
            rng_state=_plain(self.generator.bit_generator.state),
        )


def metropolis_sample(
    cfg: OracleConfig,
    sweeps: int,
    thinning: Optional[int] = None,
    burn_in: Optional[int] = None,
) -> List[CoulombGasState]:
    """Sample the fixed-beta Gibbs measure after a burn-in of 10 N sweeps"""
    sampler = MetropolisSampler(cfg)
    sampler.burn_in(burn_in)
    return sampler.run(sweeps, thinning)


def chain_mean_u(states: List[CoulombGasState]) -> float:
    if not states:
        raise NumericalError("the chain recorded no states", {})
    return float(np.mean([s.energy for s in states]))


def compare(state: CoulombGasState, solution: SpectrumSolution) -> Comparison:
    """Distances between the empirical measure of N lambda and the analytic one.

    In the separable phase the largest eigenvalue is the evaporated one and is
    left out of both distances.
    """
    sample = np.sort(state.scaled)
    if solution.phase is Phase.SEPARABLE:
        sample = sample[:-1]
    levels = (np.arange(_COMPARISON_QUANTILES) + 0.5) / _COMPARISON_QUANTILES
    reference = quantiles(solution, levels)
    wasserstein = stats.wasserstein_distance(sample, reference)
    ks = stats.kstest(sample, lambda v: cdf(solution, v)).statistic
    u_gap = abs(renyi_deficit(state.eigenvalues, solution.q) - u_of(solution, solution.q))
    return Comparison(float(wasserstein), float(ks), float(u_gap))
