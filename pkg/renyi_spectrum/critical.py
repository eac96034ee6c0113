"""This module evaluates the two critical lines of the phase diagram.

u_C(q) is the concentration line, where the left edge of the spectrum touches
zero. u_E(q) is the evaporation line (beta = 0, Marcenko-Pastur spectrum),
beyond which the largest eigenvalue leaves the sea. Both follow from the
explicit typical-phase relation u(delta, q), evaluated at delta_C(q) and at 2.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, FrozenSet, Iterable, List, Tuple

import numpy as np
from scipy import optimize

from renyi_spectrum.constants import (
    Q_MIN_EXCLUSIVE,
    UC_MINIMUM_BRACKET,
    UC_MINIMUM_SCAN_POINTS,
)
from renyi_spectrum.errors import DomainError
from renyi_spectrum.special import log_gamma

if TYPE_CHECKING:  # pragma: no cover
    from renyi_spectrum.phase_solver import PhasePoint

logger = logging.getLogger(__name__)

LOG_SQRT_PI = 0.5 * math.log(math.pi)
U_C_ASYMPTOTE = math.log(4.0 / 3.0)
U_E_ASYMPTOTE = 2.0 * math.log(2.0)
EIES = "EIES"
EISS = "EISS"


@dataclass(frozen=True)
class CriticalValues:
    """Both critical entropy deficits and the support/Tricomi data at u_C"""

    q: float
    u_C: float
    u_E: float
    delta_C: float
    A_C: float
    B_C: float


def _check_order(q: float, lower: float = Q_MIN_EXCLUSIVE):
    if not q > lower:
        raise DomainError(f"the Renyi order must exceed {lower}", {"q": q})


def typical_u(delta: float, q: float) -> float:
    """u as an explicit function of the half-width delta in the typical phase"""
    if not delta > 0:
        raise DomainError("delta must be positive", {"delta": delta})
    if q == 1:
        return 1.0 - delta / 4.0 + math.log(delta / 2.0)
    log_argument = (
        math.log((q + 1) / delta - (q - 1) / 2)
        + q * math.log(2.0 * delta)
        + log_gamma(q + 0.5)
        - LOG_SQRT_PI
        - log_gamma(q + 2)
    )
    return log_argument / (q - 1)


def typical_gamma_ratio(q: float) -> float:
    """sqrt(pi) Gamma(q+2) / (2^q Gamma(q+1/2)), the slope of B in 2/delta - 1"""
    _check_order(q, 0.0)
    return math.exp(
        LOG_SQRT_PI + log_gamma(q + 2) - q * math.log(2.0) - log_gamma(q + 0.5)
    )


def typical_coefficients(delta: float, q: float) -> Tuple[float, float]:
    """Tricomi coefficients (A, B) in the typical phase (alpha = 1)"""
    ratio = 2.0 / delta - 1.0
    gamma_ratio = typical_gamma_ratio(q)
    if q == 1:
        # limit of (q + 1 - K(q)) / (q - 1) with K(1) = 2, K'(1) = 2 ln 2 - 1
        slope = 2.0 - 2.0 * math.log(2.0)
    else:
        slope = (q + 1 - gamma_ratio) / (q - 1)
    return 1.0 - ratio * slope, ratio * gamma_ratio


def delta_C(q: float) -> float:
    """Half-width of the support on the concentration line"""
    _check_order(q)
    return 2.0 * (q + 1) / (3.0 * q)


def u_C(q: float) -> float:
    """Entropy deficit of the concentration (pushed-to-pulled) line"""
    _check_order(q)
    if q == 1:
        return 2.0 / 3.0 + math.log(2.0 / 3.0)
    log_argument = (
        q * math.log(4.0 * (q + 1) / (3.0 * q))
        + log_gamma(q + 1.5)
        - LOG_SQRT_PI
        - log_gamma(q + 2)
    )
    return log_argument / (q - 1)


def u_E(q: float) -> float:
    """Entropy deficit of the evaporation line, the typical (beta = 0) value"""
    _check_order(q, 0.0)
    if q == 1:
        return 0.5
    log_argument = (
        2.0 * q * math.log(2.0) + log_gamma(q + 0.5) - LOG_SQRT_PI - log_gamma(q + 2)
    )
    return log_argument / (q - 1)


def critical_constants(q: float) -> Tuple[float, float, float]:
    """(delta_C, A_C, B_C), the alpha -> 1 limit of the entangled solution.

    At q = 1 the analytic limits (4/3, ln 2, 1) are returned.
    """
    _check_order(q)
    if q == 1:
        return 4.0 / 3.0, math.log(2.0), 1.0
    b_crit = math.exp(
        LOG_SQRT_PI
        + log_gamma(q + 1)
        - (q - 1) * math.log(2.0)
        - log_gamma(q - 0.5)
    )
    a_crit = -1.0 - (1.0 - b_crit) / (q - 1)
    return delta_C(q), a_crit, b_crit


def critical_values(q: float) -> CriticalValues:
    """Bundle both lines and the critical constants at one order"""
    d_crit, a_crit, b_crit = critical_constants(q)
    return CriticalValues(
        q=float(q), u_C=u_C(q), u_E=u_E(q), delta_C=d_crit, A_C=a_crit, B_C=b_crit
    )


def tabulate(q_values: Iterable[float]) -> List[CriticalValues]:
    """Critical values on a grid of orders, in the given order"""
    return [critical_values(float(q)) for q in q_values]


@lru_cache(maxsize=1)
def u_C_minimum() -> Tuple[float, float]:
    """Locate the interior minimum of u_C(q).

    A coarse scan over the bracket finds the lowest grid point, then golden
    section search refines it between its two neighbours.
    """
    low, high = UC_MINIMUM_BRACKET
    grid = np.linspace(low, high, UC_MINIMUM_SCAN_POINTS)
    values = np.array([u_C(q) for q in grid])
    best = int(np.argmin(values))
    if best in (0, len(grid) - 1):
        raise DomainError(
            "u_C has no interior minimum in the scan range",
            {"bracket": [low, high], "argmin": float(grid[best])},
        )
    result = optimize.minimize_scalar(
        u_C,
        bracket=(grid[best - 1], grid[best], grid[best + 1]),
        method="golden",
        tol=1e-10,
    )
    logger.debug("u_C minimum at q=%.6f, u=%.6f", result.x, result.fun)
    return float(result.x), float(result.fun)


def region_tags(point: "PhasePoint") -> FrozenSet[str]:
    """Entropy-independent regions a point belongs to.

    EIES lies below the horizontal line tangent to the minimum of u_C, EISS
    above the u_E asymptote u = 2 ln 2. Neither depends on q.
    """
    _, u_star = u_C_minimum()
    tags = set()
    if point.u < u_star:
        tags.add(EIES)
    if point.u > U_E_ASYMPTOTE:
        tags.add(EISS)
    return frozenset(tags)
