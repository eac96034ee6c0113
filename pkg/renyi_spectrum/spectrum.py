"""This module turns a SpectrumSolution into evaluable densities and functionals.

Grids are Chebyshev-Lobatto in the reduced variable x = -cos(theta), so the
mass integrand sigma(lambda) dlambda/dtheta = [1 - A x + B h(x)] / pi stays
finite even where the density itself diverges.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy import integrate

from renyi_spectrum.constants import (
    CDF_THETA_POINTS,
    DENSITY_NEGATIVE_TOLERANCE,
    EDGE_ZERO_TOLERANCE,
    MIN_GRID_POINTS,
)
from renyi_spectrum.errors import DomainError, PhaseInconsistencyError
from renyi_spectrum.phase_solver import Phase, SpectrumSolution, separable_u
from renyi_spectrum.special import (
    DEFAULT_KERNEL_CONFIG,
    ArrayLike,
    KernelConfig,
    h_endpoints,
    h_kernel,
    tricomi_moment,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DensityGrid:
    """Density on a Chebyshev grid of the rescaled eigenvalue axis N lambda.

    A divergent edge keeps a capped finite density and sets its flag. The
    evaporated eigenvalue is never part of the grid; `mu` reports it.
    """

    lambdas: np.ndarray
    densities: np.ndarray
    phase: Phase
    mu: Optional[float]
    divergent_left: bool
    divergent_right: bool
    mass_integrand: np.ndarray

    def mass(self) -> float:
        """Trapezoidal mass in the angle variable of the Chebyshev grid"""
        theta = np.linspace(0.0, math.pi, len(self.mass_integrand))
        return float(integrate.trapezoid(self.mass_integrand, theta))


def _numerator(
    solution: SpectrumSolution, x: ArrayLike, cfg: KernelConfig
) -> np.ndarray:
    """1 - A x + B h(x, alpha), clamped at zero within the tolerance"""
    x_arr = np.asarray(x, dtype=float)
    value = 1.0 - solution.A * x_arr
    if solution.B != 0:
        value = value + solution.B * np.asarray(
            h_kernel(x_arr, solution.support.alpha, solution.q, cfg)
        )
    value = np.asarray(value, dtype=float)
    if np.any(value < -DENSITY_NEGATIVE_TOLERANCE):
        worst = int(np.argmin(value))
        raise PhaseInconsistencyError(
            "reconstructed density is negative, the wrong phase was used",
            {
                "phase": solution.phase.value,
                "x": float(np.ravel(x_arr)[worst]),
                "value": float(np.ravel(value)[worst]),
            },
        )
    return np.maximum(value, 0.0)


def edge_values(
    solution: SpectrumSolution, cfg: KernelConfig = DEFAULT_KERNEL_CONFIG
) -> Tuple[float, float]:
    """Numerator 1 - A x + B h(x) at x = -1 and x = 1.

    Zero marks a regular (square-root) edge, a positive value a divergent one.
    """
    if solution.B == 0:
        return 1.0 + solution.A, 1.0 - solution.A
    right, left = h_endpoints(solution.support.alpha, solution.q)
    return (
        1.0 + solution.A + solution.B * left,
        1.0 - solution.A + solution.B * right,
    )


def phi(
    solution: SpectrumSolution, x: ArrayLike, cfg: KernelConfig = DEFAULT_KERNEL_CONFIG
) -> ArrayLike:
    """Density of the reduced variable x in [-1, 1].

    Edges evaluate to 0 when regular and to +inf when the density diverges.
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(np.abs(x_arr) > 1.0):
        raise DomainError("phi is defined on [-1, 1]", {"x": x_arr.tolist()})
    interior = np.abs(x_arr) < 1.0
    values = np.zeros_like(x_arr)
    if np.any(interior):
        inner = x_arr[interior]
        values[interior] = _numerator(solution, inner, cfg) / (
            math.pi * np.sqrt(1.0 - inner * inner)
        )
    if not np.all(interior):
        left, right = edge_values(solution, cfg)
        values = np.where(
            x_arr == -1.0, np.inf if left > EDGE_ZERO_TOLERANCE else 0.0, values
        )
        values = np.where(
            x_arr == 1.0, np.inf if right > EDGE_ZERO_TOLERANCE else 0.0, values
        )
    return values if x_arr.ndim else float(values)


def sigma(
    solution: SpectrumSolution, lam: ArrayLike, cfg: KernelConfig = DEFAULT_KERNEL_CONFIG
) -> ArrayLike:
    """Density of the rescaled eigenvalue N lambda, zero outside the support"""
    lam_arr = np.asarray(lam, dtype=float)
    support = solution.support
    inside = (lam_arr >= support.a) & (lam_arr <= support.b)
    values = np.zeros_like(lam_arr)
    if np.any(inside):
        x = np.clip(lam_arr[inside] / support.delta - support.alpha, -1.0, 1.0)
        values[inside] = np.asarray(phi(solution, x, cfg)) / support.delta
    return values if lam_arr.ndim else float(values)


def moment(
    solution: SpectrumSolution, p: float, cfg: KernelConfig = DEFAULT_KERNEL_CONFIG
) -> float:
    """int sigma(lambda) lambda^p dlambda.

    In the separable phase the moment is taken in the sea's own variable
    (N - 1) lambda / (1 - mu), where the sea has unit mass and unit mean.
    """
    if not p >= 0:
        raise DomainError("moment order must be non-negative", {"p": p})
    if p == 0:
        return tricomi_moment(
            solution.A, solution.B, solution.support.alpha, solution.q, 0.0, cfg
        )
    delta = solution.support.delta
    if solution.phase is Phase.SEPARABLE:
        delta = delta / solution.sea_scale
    integral = tricomi_moment(
        solution.A, solution.B, solution.support.alpha, solution.q, p, cfg
    )
    return delta ** p * integral


def u_of(
    solution: SpectrumSolution, q: float, cfg: KernelConfig = DEFAULT_KERNEL_CONFIG
) -> float:
    """Entropy deficit ln N - S_q of the solution measured at order q.

    The order may differ from the solution's own, which gives cross-entropy
    readings. In the separable phase the evaporated eigenvalue carries u.
    """
    if not q > 0:
        raise DomainError("the Renyi order q must be positive", {"q": q})
    if solution.phase is Phase.SEPARABLE:
        return separable_u(solution.mu, solution.point.N, q)
    support = solution.support
    if q == 1:
        mean = tricomi_moment(solution.A, solution.B, support.alpha, solution.q, 1.0, cfg)
        log_mean = tricomi_moment(
            solution.A, solution.B, support.alpha, solution.q, 1.0, cfg, log_weighted=True
        )
        return support.delta * (math.log(support.delta) * mean + log_mean)
    return math.log(moment(solution, q, cfg)) / (q - 1)


@lru_cache(maxsize=128)
def _cdf_table(
    solution: SpectrumSolution, cfg: KernelConfig
) -> Tuple[np.ndarray, np.ndarray]:
    theta = np.linspace(0.0, math.pi, CDF_THETA_POINTS)
    x = -np.cos(theta)
    x[0], x[-1] = -1.0, 1.0
    integrand = np.empty_like(x)
    integrand[1:-1] = _numerator(solution, x[1:-1], cfg) / math.pi
    left, right = edge_values(solution, cfg)
    integrand[0], integrand[-1] = max(left, 0.0) / math.pi, max(right, 0.0) / math.pi
    cumulative = integrate.cumulative_trapezoid(integrand, theta, initial=0.0)
    cumulative /= cumulative[-1]
    support = solution.support
    lambdas = support.delta * (x + support.alpha)
    return lambdas, cumulative


def cdf(
    solution: SpectrumSolution, lam: ArrayLike, cfg: KernelConfig = DEFAULT_KERNEL_CONFIG
) -> ArrayLike:
    """Cumulative distribution of N lambda (of the sea in the separable phase)"""
    lambdas, cumulative = _cdf_table(solution, cfg)
    values = np.interp(np.asarray(lam, dtype=float), lambdas, cumulative, 0.0, 1.0)
    return values if np.ndim(lam) else float(values)


def quantiles(
    solution: SpectrumSolution,
    levels: ArrayLike,
    cfg: KernelConfig = DEFAULT_KERNEL_CONFIG,
) -> np.ndarray:
    """Inverse of `cdf` at probability levels in [0, 1]"""
    lambdas, cumulative = _cdf_table(solution, cfg)
    return np.interp(np.asarray(levels, dtype=float), cumulative, lambdas)


def export_grid(
    solution: SpectrumSolution,
    n_points: int,
    cfg: KernelConfig = DEFAULT_KERNEL_CONFIG,
) -> DensityGrid:
    """Evaluate sigma on a Chebyshev-Lobatto grid clustered at the edges"""
    if n_points < MIN_GRID_POINTS:
        raise DomainError(
            f"a density grid needs at least {MIN_GRID_POINTS} points",
            {"n_points": n_points},
        )
    theta = np.linspace(0.0, math.pi, n_points)
    x = -np.cos(theta)
    x[0], x[-1] = -1.0, 1.0
    support = solution.support
    lambdas = support.delta * (x + support.alpha)

    numerators = np.empty(n_points)
    numerators[1:-1] = _numerator(solution, x[1:-1], cfg)
    left, right = edge_values(solution, cfg)
    numerators[0], numerators[-1] = max(left, 0.0), max(right, 0.0)

    densities = np.zeros(n_points)
    densities[1:-1] = numerators[1:-1] / (
        math.pi * support.delta * np.sqrt(1.0 - x[1:-1] ** 2)
    )
    divergent_left = left > EDGE_ZERO_TOLERANCE
    divergent_right = right > EDGE_ZERO_TOLERANCE
    cap = float(densities[1:-1].max()) if n_points > 2 else 0.0
    if divergent_left:
        densities[0] = cap
        logger.debug("density diverges at lambda=%g, capped at %g", lambdas[0], cap)
    if divergent_right:
        densities[-1] = cap

    return DensityGrid(
        lambdas=lambdas,
        densities=densities,
        phase=solution.phase,
        mu=solution.mu,
        divergent_left=bool(divergent_left),
        divergent_right=bool(divergent_right),
        mass_integrand=numerators / math.pi,
    )
