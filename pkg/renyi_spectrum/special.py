"""This module provides the special functions and the principal-value kernels
h(x, alpha) and g(alpha) consumed by the phase solvers.

The interior kernel is evaluated by expanding

    f(y) = ((y + alpha)^(q-1) - 1) / (q - 1)        (ln(y + alpha) at q = 1)

in Chebyshev polynomials of the second kind. The weighted finite Hilbert
transform maps U_n onto -T_{n+1}, so the principal value never has to be
integrated numerically. The endpoint values h(+-1, alpha) and g(alpha) are
Jacobi-weight moments of f and are taken from Gauss hypergeometric closed forms,
which stay exact on the critical line alpha = 1.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple, Union

import numpy as np
from numpy.polynomial import chebyshev
from scipy import integrate, special

from renyi_spectrum.constants import (
    KERNEL_CHEBYSHEV_ORDER,
    KERNEL_CRITICAL_ORDER,
    KERNEL_MAX_ORDER,
    KERNEL_QUADRATURE_POINTS,
    KERNEL_TAIL_LENGTH,
    KERNEL_TOLERANCE,
)
from renyi_spectrum.errors import DomainError, KernelAccuracyError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class KernelConfig:
    """Accuracy settings shared by the kernels and the quadratures built on them"""

    chebyshev_order: int = KERNEL_CHEBYSHEV_ORDER
    quadrature_points: int = KERNEL_QUADRATURE_POINTS
    tolerance: float = KERNEL_TOLERANCE
    max_order: int = KERNEL_MAX_ORDER
    allow_quadrature_fallback: bool = True

    def __post_init__(self):
        if self.chebyshev_order < 8:
            raise DomainError(
                "chebyshev_order must be at least 8",
                {"chebyshev_order": self.chebyshev_order},
            )
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive", {"tolerance": self.tolerance})
        if self.quadrature_points < 2 * self.chebyshev_order:
            raise DomainError(
                "quadrature_points must be at least twice chebyshev_order",
                {
                    "quadrature_points": self.quadrature_points,
                    "chebyshev_order": self.chebyshev_order,
                },
            )
        if self.max_order < self.chebyshev_order:
            raise DomainError(
                "max_order must not be below chebyshev_order",
                {"max_order": self.max_order, "chebyshev_order": self.chebyshev_order},
            )


DEFAULT_KERNEL_CONFIG = KernelConfig()


def log_gamma(z: float) -> float:
    """Natural logarithm of the Gamma function for z > 0"""
    if not z > 0:
        raise DomainError("log_gamma is only defined for positive arguments", {"z": z})
    return float(special.gammaln(z))


def is_integer_order(q: float) -> bool:
    """True for the Renyi orders 2, 3, ... where the kernels are polynomial"""
    return q >= 2 and float(q).is_integer()


def power_integrand(y: ArrayLike, alpha: float, q: float) -> ArrayLike:
    """The function ((y + alpha)^(q-1) - 1)/(q - 1) whose transform is h.

    At q = 1 this is ln(y + alpha). Away from q = 1 the expm1 form keeps the
    small-(q-1) regime free of cancellation.
    """
    shifted = np.asarray(y, dtype=float) + alpha
    if q == 1:
        with np.errstate(divide="ignore"):
            return np.log(shifted)
    if is_integer_order(q):
        return (shifted ** int(q - 1) - 1.0) / (q - 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.expm1((q - 1) * np.log(shifted)) / (q - 1)


def integrand_scale(alpha: float, q: float) -> float:
    """Magnitude of f on [-1, 1], at least one; kernel tolerances are relative to it"""
    ends = np.abs(power_integrand(np.array([-1.0, 1.0]), alpha, q))
    finite = ends[np.isfinite(ends)]
    return float(max(1.0, finite.max())) if finite.size else 1.0


def _power_integrand_derivative(y: float, alpha: float, q: float) -> float:
    return (y + alpha) ** (q - 2)


def _check_arguments(alpha: float, q: float):
    if not q > 0:
        raise DomainError("the Renyi order q must be positive", {"q": q})
    if not alpha >= 1 and not is_integer_order(q):
        raise DomainError(
            "alpha < 1 needs a fractional power of a negative base",
            {"alpha": alpha, "q": q},
        )


def _jacobi_mean(alpha: float, q: float, b_param: float, c_param: float) -> float:
    """Mean of (y + alpha)^(q-1) against a normalised Jacobi weight on [-1, 1]"""
    z = 2.0 / (alpha + 1.0)
    value = (alpha + 1.0) ** (q - 1) * special.hyp2f1(1.0 - q, b_param, c_param, z)
    return float(value)


def h_endpoints(alpha: float, q: float) -> Tuple[float, float]:
    """Closed forms of h(1, alpha) and h(-1, alpha).

    h(1) = -(1/pi) int sqrt((1+y)/(1-y)) f(y) dy and
    h(-1) = (1/pi) int sqrt((1-y)/(1+y)) f(y) dy are ordinary integrals.

    Args:
        alpha (float): support shape parameter, alpha >= 1
        q (float): Renyi order

    Returns:
        Tuple[float, float]: (h(1, alpha), h(-1, alpha))
    """
    _check_arguments(alpha, q)
    if q == 1:
        t = alpha + math.sqrt(alpha * alpha - 1.0)
        log_term = math.log(2.0 / t)
        return -1.0 / t + log_term, -1.0 / t - log_term
    if alpha == 1 and q <= 0.5:
        raise DomainError(
            "h(-1, 1) diverges for q <= 1/2", {"alpha": alpha, "q": q}
        )
    right = -(_jacobi_mean(alpha, q, 0.5, 2.0) - 1.0) / (q - 1)
    left = (_jacobi_mean(alpha, q, 1.5, 2.0) - 1.0) / (q - 1)
    return right, left


def g_kernel(
    alpha: float, q: float, cfg: KernelConfig = DEFAULT_KERNEL_CONFIG
) -> float:
    """(1/pi) int sqrt(1 - y^2) f(y) dy, the moment entering the mean constraint"""
    _check_arguments(alpha, q)
    if q == 1:
        t = alpha + math.sqrt(alpha * alpha - 1.0)
        return 0.25 / (t * t) - 0.5 * math.log(2.0 / t)
    return 0.5 * (_jacobi_mean(alpha, q, 1.5, 3.0) - 1.0) / (q - 1)


@dataclass(frozen=True, eq=False)
class TricomiKernel:
    """Chebyshev representation of h(., alpha) for one (alpha, q) pair.

    `coefficients` is the first-kind Chebyshev series of h itself. When the
    expansion of f did not reach the tolerance, `converged` is False and
    interior values are computed by adaptive quadrature instead.
    """

    alpha: float
    q: float
    order: int
    coefficients: np.ndarray
    residual: float
    converged: bool
    tolerance: float

    def __call__(self, x: ArrayLike) -> ArrayLike:
        x_arr = np.asarray(x, dtype=float)
        if self.converged:
            return chebyshev.chebval(x_arr, self.coefficients)
        values = np.vectorize(self._interior_by_quadrature, otypes=[float])(x_arr)
        return values if x_arr.ndim else float(values)

    def _interior_by_quadrature(self, x: float) -> float:
        if abs(x) >= 1.0:
            right, left = h_endpoints(self.alpha, self.q)
            return right if x > 0 else left
        return _h_by_quadrature(x, self.alpha, self.q, self.tolerance)


def _h_by_quadrature(x: float, alpha: float, q: float, tolerance: float) -> float:
    """h(x) = -x f(x) + (1/pi) int sqrt(1-y^2) (f(y) - f(x))/(y - x) dy"""
    fx = float(power_integrand(x, alpha, q))
    scale = integrand_scale(alpha, q)
    slope = _power_integrand_derivative(x, alpha, q)

    def divided_difference(y: float) -> float:
        if y == x:
            return math.sqrt(1.0 - y * y) * slope
        fy = float(power_integrand(y, alpha, q))
        return math.sqrt(1.0 - y * y) * (fy - fx) / (y - x)

    value, abserr = integrate.quad(
        divided_difference,
        -1.0,
        1.0,
        epsabs=scale * tolerance / 10,
        epsrel=tolerance,
        limit=400,
    )
    # QUADPACK error estimates are pessimistic by about an order of magnitude
    if abserr / math.pi > 10 * tolerance * max(scale, abs(value) / math.pi):
        raise KernelAccuracyError(
            "adaptive quadrature of h did not reach the tolerance",
            residual=abserr / math.pi,
            x=x,
            alpha=alpha,
            q=q,
        )
    return -x * fx + value / math.pi


def _second_kind_coefficients(first_kind: np.ndarray) -> np.ndarray:
    """Re-express sum a_n T_n as sum c_n U_n"""
    padded = np.concatenate([first_kind, np.zeros(2)])
    second_kind = 0.5 * (padded[:-2] - padded[2:])
    second_kind[0] = padded[0] - 0.5 * padded[2]
    return second_kind


@lru_cache(maxsize=512)
def tricomi_kernel(
    alpha: float, q: float, cfg: KernelConfig = DEFAULT_KERNEL_CONFIG
) -> TricomiKernel:
    """Build (and cache) the Chebyshev representation of h(., alpha)"""
    _check_arguments(alpha, q)
    order = cfg.chebyshev_order
    scale = integrand_scale(alpha, q)
    if alpha == 1:
        order = max(order, min(KERNEL_CRITICAL_ORDER, cfg.max_order))

    while True:
        first_kind = chebyshev.chebinterpolate(
            power_integrand, order, args=(alpha, q)
        )
        # roundoff in the coefficients grows with the size of f
        residual = float(np.abs(first_kind[-KERNEL_TAIL_LENGTH:]).sum()) / scale
        if residual <= cfg.tolerance or 2 * order > cfg.max_order:
            break
        order *= 2
        logger.debug("raising Chebyshev order to %d (alpha=%s, q=%s)", order, alpha, q)

    converged = residual <= cfg.tolerance
    if not converged:
        if not cfg.allow_quadrature_fallback:
            raise KernelAccuracyError(
                "Chebyshev expansion of the kernel did not converge",
                residual=residual,
                alpha=alpha,
                q=q,
                order=order,
            )
        logger.debug(
            "kernel expansion stalled at order %d (residual %.2e), "
            "using adaptive quadrature for alpha=%s q=%s",
            order,
            residual,
            alpha,
            q,
        )

    second_kind = _second_kind_coefficients(first_kind)
    coefficients = np.concatenate([[0.0], -second_kind])
    return TricomiKernel(
        alpha=float(alpha),
        q=float(q),
        order=order,
        coefficients=coefficients,
        residual=residual,
        converged=converged,
        tolerance=cfg.tolerance,
    )


def h_kernel(
    x: ArrayLike, alpha: float, q: float, cfg: KernelConfig = DEFAULT_KERNEL_CONFIG
) -> ArrayLike:
    """(1/pi) PV int sqrt(1 - y^2) f(y) / (y - x) dy for |x| <= 1"""
    x_arr = np.asarray(x, dtype=float)
    if np.any(np.abs(x_arr) > 1.0):
        raise DomainError("h_kernel is defined on [-1, 1]", {"x": x_arr.tolist()})
    values = tricomi_kernel(float(alpha), float(q), cfg)(x_arr)
    return values if x_arr.ndim else float(values)


def tricomi_moment(
    A: float,
    B: float,
    alpha: float,
    q: float,
    power: float,
    cfg: KernelConfig = DEFAULT_KERNEL_CONFIG,
    log_weighted: bool = False,
) -> float:
    """Integral of phi(x) (x + alpha)^power [ln(x + alpha)] over [-1, 1].

    phi(x) = [1 - A x + B h(x, alpha)] / (pi sqrt(1 - x^2)). For alpha > 1 the
    bracket times the power is smooth and Gauss-Chebyshev quadrature of the
    first kind is spectrally accurate. On the critical line alpha = 1 the factor
    (1 + x)^power is folded into an algebraic weight handled by QUADPACK.
    """
    if power <= -0.5:
        raise DomainError("moment power must exceed -1/2", {"power": power})
    kernel = tricomi_kernel(float(alpha), float(q), cfg) if B != 0 else None

    def numerator(x: ArrayLike) -> ArrayLike:
        value = 1.0 - A * np.asarray(x, dtype=float)
        if kernel is not None:
            value = value + B * kernel(x)
        return value

    if alpha > 1 and (kernel is None or kernel.converged):
        order = kernel.order if kernel is not None else 0
        nodes, weights = chebyshev.chebgauss(max(cfg.quadrature_points, order + 2))
        shifted = nodes + alpha
        factor = shifted ** power
        if log_weighted:
            factor = factor * np.log(shifted)
        return float(np.sum(weights * numerator(nodes) * factor) / math.pi)

    if alpha > 1:

        def integrand(x: float) -> float:
            value = float(numerator(x)) * (x + alpha) ** power
            return value * math.log(x + alpha) if log_weighted else value

        result, _ = integrate.quad(
            integrand, -1.0, 1.0, weight="alg", wvar=(-0.5, -0.5), limit=200
        )
        return result / math.pi

    result, _ = integrate.quad(
        lambda x: float(numerator(x)),
        -1.0,
        1.0,
        weight="alg-loga" if log_weighted else "alg",
        wvar=(power - 0.5, -0.5),
        limit=200,
    )
    return result / math.pi
