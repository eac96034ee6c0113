"""This module solves the large-N saddle-point problem at a point (q, u[, N]).

The rescaled spectrum lives on [a, b] = [delta (alpha - 1), delta (alpha + 1)].
In the entangled phase alpha > 1 and both edges are regular; in the typical
phase a = 0 (alpha = 1) and only the right edge is regular; in the separable
phase one eigenvalue mu = O(1) leaves a Marcenko-Pastur sea behind.
"""
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import optimize

from renyi_spectrum.constants import (
    ENTANGLED_ALPHA_GROWTH,
    ENTANGLED_ALPHA_LIMIT,
    ENTANGLED_ALPHA_START,
    ROOT_MAX_ITERATIONS,
    ROOT_PARAMETER_TOLERANCE,
    ROOT_U_TOLERANCE,
)
from renyi_spectrum.critical import (
    critical_constants,
    delta_C,
    typical_coefficients,
    typical_u,
    u_C,
    u_E,
)
from renyi_spectrum.errors import (
    DomainError,
    MissingParameterError,
    OutOfRangeError,
    RootFindingError,
    WrongPhaseError,
)
from renyi_spectrum.special import (
    DEFAULT_KERNEL_CONFIG,
    KernelConfig,
    g_kernel,
    h_endpoints,
    tricomi_moment,
)

logger = logging.getLogger(__name__)


class Phase(str, Enum):
    """The three phases of the (q, u) diagram"""

    ENTANGLED = "Entangled"
    TYPICAL = "Typical"
    SEPARABLE = "Separable"


@dataclass(frozen=True)
class PhasePoint:
    """A query point: Renyi order q, entropy deficit u = ln N - S_q, optional N"""

    q: float
    u: float
    N: Optional[int] = None

    def __post_init__(self):
        if not self.q > 0:
            raise DomainError("the Renyi order q must be positive", {"q": self.q})
        if not self.u >= 0:
            raise DomainError("the entropy deficit u must be non-negative", {"u": self.u})
        if self.N is not None:
            if int(self.N) != self.N or self.N < 1:
                raise DomainError("N must be a positive integer", {"N": self.N})
            if self.u > math.log(self.N):
                raise OutOfRangeError(
                    "the entropy deficit cannot exceed ln N",
                    {"u": self.u, "N": self.N, "ln_N": math.log(self.N)},
                )


@dataclass(frozen=True)
class SupportParams:
    """Edges of the rescaled support and its (delta, alpha) parametrisation"""

    a: float
    b: float
    delta: float
    alpha: float

    @classmethod
    def from_shape(cls, delta: float, alpha: float) -> "SupportParams":
        return cls(
            a=delta * (alpha - 1.0), b=delta * (alpha + 1.0), delta=delta, alpha=alpha
        )


@dataclass(frozen=True)
class SpectrumSolution:
    """Analytic large-N solution at a phase point.

    In the separable phase `support` covers the sea in units of N lambda and
    `sea_scale` = (1 - mu) N / (N - 1) converts it to the sea's own variable,
    whose density is exactly Marcenko-Pastur.
    """

    phase: Phase
    point: PhasePoint
    support: SupportParams
    A: float
    B: float
    beta: float
    xi: float
    mu: Optional[float] = None
    boundary: bool = False
    sea_scale: float = 1.0

    @property
    def q(self) -> float:
        return self.point.q

    @property
    def u(self) -> float:
        return self.point.u


def classify(point: PhasePoint) -> Phase:
    """Place a point in the phase diagram; the critical lines belong to Typical"""
    critical_u = u_C(point.q)
    if point.u < critical_u:
        return Phase.ENTANGLED
    if point.u <= u_E(point.q):
        return Phase.TYPICAL
    if point.N is None:
        raise MissingParameterError(
            "the separable phase depends explicitly on N",
            {"q": point.q, "u": point.u, "u_E": u_E(point.q)},
        )
    return Phase.SEPARABLE


def _bounded_root(
    func: Callable[[float], float], low: float, high: float, name: str
) -> float:
    """Brent's method (bisection safeguarded by secant/inverse quadratic steps)"""
    f_low, f_high = func(low), func(high)
    if f_low == 0:
        return low
    if f_high == 0:
        return high
    if np.sign(f_low) == np.sign(f_high):
        raise RootFindingError(
            f"no sign change for {name} in the bracket",
            bracket=[low, high],
            values=[f_low, f_high],
        )
    try:
        root = optimize.brentq(
            func,
            low,
            high,
            xtol=ROOT_PARAMETER_TOLERANCE,
            maxiter=ROOT_MAX_ITERATIONS,
        )
    except RuntimeError as err:
        raise RootFindingError(
            f"root finding for {name} did not converge: {err}",
            bracket=[low, high],
            values=[f_low, f_high],
        ) from err
    return float(root)


def _u_prefactor(q: float, u: float) -> float:
    """exp((q - 1) u), the factor between beta and the coefficient B"""
    return math.exp((q - 1) * u)


def _log_derivative_term(delta: float, q: float) -> float:
    """(q delta^(q-1) - 1)/(q - 1), equal to 1 + ln(delta) at q = 1"""
    if q == 1:
        return 1.0 + math.log(delta)
    return (q * delta ** (q - 1) - 1.0) / (q - 1)


def _tricomi_multipliers(
    A: float, B: float, delta: float, q: float, u: float
) -> Tuple[float, float]:
    beta = 2.0 * B * _u_prefactor(q, u) / (q * delta ** q)
    xi = 2.0 * A / delta - beta / _u_prefactor(q, u) * _log_derivative_term(delta, q)
    return beta, xi


def separable_u(mu: float, N: int, q: float) -> float:
    """Entropy deficit carried by an evaporated eigenvalue mu at finite N"""
    if q == 1:
        return mu * math.log(N * mu)
    log_power = (q - 1) * math.log(N) + q * math.log(mu)
    if mu < 1:
        log_argument = float(np.logaddexp(log_power, math.log1p(-mu)))
    else:
        log_argument = log_power
    return log_argument / (q - 1)


def _separable_multipliers(mu: float, N: int, q: float) -> Tuple[float, float]:
    if mu >= 1:
        return -math.inf, math.inf
    xi = 1.0 / (1.0 - mu)
    if q == 1:
        field = (1.0 + math.log(N * mu)) / mu
    else:
        log_power = (q - 1) * math.log(N) + q * math.log(mu)
        field = q / ((q - 1) * mu) - math.exp(-log_power) / (q - 1)
    return -xi / field, xi


def multipliers(solution: SpectrumSolution) -> Tuple[float, float]:
    """Lagrange multipliers (beta, xi) recovered from a solution.

    Entangled and typical phases use the definitions of A and B; the separable
    phase uses the mu relations, where xi = 1/(1 - mu) and beta < 0.
    """
    if solution.phase is Phase.SEPARABLE:
        return _separable_multipliers(solution.mu, solution.point.N, solution.q)
    return _tricomi_multipliers(
        solution.A, solution.B, solution.support.delta, solution.q, solution.u
    )


def von_neumann_u(beta: float) -> float:
    """u(beta) = ln(1 - 1/(2 beta)) + 1/beta along the q = 1 entangled branch"""
    if not beta >= 1.5:
        raise DomainError("the q = 1 relation holds for beta >= 3/2", {"beta": beta})
    return math.log1p(-0.5 / beta) + 1.0 / beta


def von_neumann_beta(u: float) -> float:
    """Invert von_neumann_u on (0, u_C(1)]; u(beta) is strictly decreasing"""
    critical_u = u_C(1.0)
    if not 0 < u <= critical_u:
        raise WrongPhaseError(
            "the q = 1 relation is only invertible on (0, u_C(1)]",
            {"u": u, "u_C": critical_u},
        )
    high = 3.0
    while von_neumann_u(high) > u:
        high *= 2.0
    return _bounded_root(lambda b: von_neumann_u(b) - u, 1.5, high, "beta")


def entangled_coefficients(alpha: float, q: float) -> Tuple[float, float, float]:
    """(A, B, delta) from the regularity conditions at both edges"""
    if alpha == 1:
        d_crit, a_crit, b_crit = critical_constants(q)
        return a_crit, b_crit, d_crit
    right, left = h_endpoints(alpha, q)
    total = right + left
    a_coef = -(right - left) / total
    b_coef = -2.0 / total
    delta = 1.0 / (alpha - 0.5 * a_coef - b_coef * g_kernel(alpha, q))
    return a_coef, b_coef, delta


def entangled_u(
    alpha: float, q: float, cfg: KernelConfig = DEFAULT_KERNEL_CONFIG
) -> float:
    """u at a given alpha > 1, from the density's q-th moment"""
    if alpha == 1:
        return u_C(q)
    a_coef, b_coef, delta = entangled_coefficients(alpha, q)
    if q == 1:
        mean = tricomi_moment(a_coef, b_coef, alpha, q, 1.0, cfg)
        log_mean = tricomi_moment(a_coef, b_coef, alpha, q, 1.0, cfg, log_weighted=True)
        return delta * (math.log(delta) * mean + log_mean)
    moment = tricomi_moment(a_coef, b_coef, alpha, q, q, cfg)
    return (q * math.log(delta) + math.log(moment)) / (q - 1)


def _entangled_closed_form(q: float, u: float) -> Tuple[float, float, float, float]:
    """(alpha, A, B, delta) from the q = 1 and q = 2 closed forms"""
    if q == 2:
        alpha = 0.5 / math.sqrt(math.expm1(u))
        return alpha, -2.0 * (alpha - 1.0), 2.0, 1.0 / alpha
    beta = von_neumann_beta(u)
    t = math.sqrt(beta - 0.5)
    alpha = 0.5 * (t + 1.0 / t)
    return alpha, t * math.log(2.0 / t), t, 4.0 * t / (2.0 * t * t + 1.0)


def _entangled_alpha(q: float, u: float, cfg: KernelConfig) -> float:
    def mismatch(alpha: float) -> float:
        return entangled_u(alpha, q, cfg) - u

    high = ENTANGLED_ALPHA_START
    while mismatch(high) > 0:
        high *= ENTANGLED_ALPHA_GROWTH
        logger.debug("growing entangled bracket to alpha=%g", high)
        if high > ENTANGLED_ALPHA_LIMIT:
            raise RootFindingError(
                "could not bracket alpha in the entangled phase",
                bracket=[1.0, high],
                q=q,
                u=u,
            )
    alpha = _bounded_root(mismatch, 1.0, high, "alpha")
    residual = abs(mismatch(alpha))
    if residual > ROOT_U_TOLERANCE:
        raise RootFindingError(
            "entangled solution misses the requested u",
            bracket=[1.0, high],
            alpha=alpha,
            residual=residual,
        )
    return alpha


def solve_entangled(
    point: PhasePoint,
    cfg: KernelConfig = DEFAULT_KERNEL_CONFIG,
    closed_form: bool = True,
) -> SpectrumSolution:
    """Solve the entangled phase 0 < u < u_C(q).

    q = 1 and q = 2 use closed forms unless `closed_form` is False, in which
    case the general kernel path runs and serves as a regression target.
    """
    q, u = point.q, point.u
    critical_u = u_C(q)
    if u == 0:
        raise DomainError(
            "u = 0 is the maximally entangled limit, a point mass at lambda = 1",
            {"q": q, "u": u},
        )
    if not u < critical_u:
        raise WrongPhaseError(
            "the entangled phase requires 0 < u < u_C(q)",
            {"q": q, "u": u, "u_C": critical_u},
        )
    if closed_form and q in (1, 2):
        alpha, a_coef, b_coef, delta = _entangled_closed_form(q, u)
    else:
        alpha = _entangled_alpha(q, u, cfg)
        a_coef, b_coef, delta = entangled_coefficients(alpha, q)

    solution = SpectrumSolution(
        phase=Phase.ENTANGLED,
        point=point,
        support=SupportParams.from_shape(delta, alpha),
        A=a_coef,
        B=b_coef,
        beta=math.nan,
        xi=math.nan,
    )
    beta, xi = multipliers(solution)
    logger.debug("entangled q=%s u=%s -> alpha=%.12g delta=%.12g", q, u, alpha, delta)
    return replace(solution, beta=beta, xi=xi)


def _check_typical_monotone(q: float, low: float, high: float):
    grid = np.linspace(low, high, 17)
    values = np.array([typical_u(d, q) for d in grid])
    if np.any(np.diff(values) <= 0):
        logger.warning(
            "u(delta) is not increasing on [%.6g, %.6g] at q=%s", low, high, q
        )


def solve_typical(
    point: PhasePoint, cfg: KernelConfig = DEFAULT_KERNEL_CONFIG
) -> SpectrumSolution:
    """Solve the typical phase u_C(q) <= u <= u_E(q), where alpha = 1"""
    q, u = point.q, point.u
    low_u, high_u = u_C(q), u_E(q)
    if not low_u <= u <= high_u:
        raise WrongPhaseError(
            "the typical phase requires u_C(q) <= u <= u_E(q)",
            {"q": q, "u": u, "u_C": low_u, "u_E": high_u},
        )
    low, high = delta_C(q), 2.0
    if u == low_u:
        delta = low
    elif u == high_u:
        delta = high
    else:
        _check_typical_monotone(q, low, high)
        delta = _bounded_root(lambda d: typical_u(d, q) - u, low, high, "delta")

    a_coef, b_coef = typical_coefficients(delta, q)
    solution = SpectrumSolution(
        phase=Phase.TYPICAL,
        point=point,
        support=SupportParams.from_shape(delta, 1.0),
        A=a_coef,
        B=b_coef,
        beta=math.nan,
        xi=math.nan,
        boundary=u in (low_u, high_u),
    )
    beta, xi = multipliers(solution)
    return replace(solution, beta=beta, xi=xi)


def evaporated_eigenvalue(N: int, q: float, u: float) -> float:
    """Largest root mu in (0, 1] of N^(q-1) mu^q - mu + 1 = exp((q - 1) u)"""

    def mismatch(mu: float) -> float:
        return separable_u(mu, N, q) - u

    if mismatch(1.0) == 0:
        return 1.0
    upper = 1.0
    for _ in range(64):
        lower = 0.5 * upper
        if mismatch(lower) < 0:
            return _bounded_root(mismatch, lower, upper, "mu")
        upper = lower
    raise RootFindingError(
        "no evaporated eigenvalue in (0, 1]", bracket=[0.0, 1.0], N=N, q=q, u=u
    )


def solve_separable(
    point: PhasePoint, cfg: KernelConfig = DEFAULT_KERNEL_CONFIG
) -> SpectrumSolution:
    """Solve the separable phase u_E(q) < u <= ln N.

    The sea of the remaining N - 1 eigenvalues is Marcenko-Pastur in the
    variable (N - 1) lambda / (1 - mu).
    """
    q, u, size = point.q, point.u, point.N
    if size is None:
        raise MissingParameterError(
            "the separable phase depends explicitly on N", {"q": q, "u": u}
        )
    high_u = u_E(q)
    if not u > high_u:
        raise WrongPhaseError(
            "the separable phase requires u > u_E(q)", {"q": q, "u": u, "u_E": high_u}
        )
    mu = evaporated_eigenvalue(size, q, u)
    sea_scale = (1.0 - mu) * size / (size - 1) if size > 1 else 0.0
    beta, xi = _separable_multipliers(mu, size, q)
    return SpectrumSolution(
        phase=Phase.SEPARABLE,
        point=point,
        support=SupportParams.from_shape(2.0 * sea_scale, 1.0),
        A=1.0,
        B=0.0,
        beta=beta,
        xi=xi,
        mu=mu,
        sea_scale=sea_scale,
    )


def solve(
    point: PhasePoint, cfg: KernelConfig = DEFAULT_KERNEL_CONFIG
) -> SpectrumSolution:
    """Classify a point and dispatch to the matching phase solver"""
    phase = classify(point)
    if phase is Phase.ENTANGLED:
        return solve_entangled(point, cfg)
    if phase is Phase.TYPICAL:
        return solve_typical(point, cfg)
    return solve_separable(point, cfg)
