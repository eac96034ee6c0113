"""This module samples entanglement spectra of Haar-random pure states.

For a balanced bipartition the reduced state of a uniformly random pure state
is W / tr W with W = G G^dagger and G an N x N matrix of standard complex
Gaussians, so no state vector or partial trace is ever formed.
"""
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional

import numpy as np
from scipy import linalg, special, stats

from renyi_spectrum.constants import HAAR_MIN_N
from renyi_spectrum.errors import DomainError, NumericalError
from renyi_spectrum.special import ArrayLike

logger = logging.getLogger(__name__)


def make_generator(seed: int) -> np.random.Generator:
    """Counter-based generator shared by every stochastic routine of the package"""
    if int(seed) != seed or seed < 0 or seed >= 2 ** 64:
        raise DomainError("the seed must be a 64-bit unsigned integer", {"seed": seed})
    return np.random.Generator(np.random.Philox(int(seed)))


@dataclass(frozen=True, eq=False)
class EmpiricalSpectrum:
    """Sorted scaled eigenvalues N lambda of one sampled reduced state"""

    scaled_eigenvalues: np.ndarray
    N: int
    seed: Optional[int] = None

    @property
    def eigenvalues(self) -> np.ndarray:
        """Unscaled eigenvalues, summing to one"""
        return self.scaled_eigenvalues / self.N


def _check_size(N: int):
    if int(N) != N or N < HAAR_MIN_N:
        raise DomainError(
            f"the Hilbert space dimension must be an integer >= {HAAR_MIN_N}", {"N": N}
        )


def wishart_spectrum(gaussian: np.ndarray) -> np.ndarray:
    """Scaled, sorted, trace-normalised spectrum of G G^dagger"""
    size = gaussian.shape[0]
    wishart = gaussian @ gaussian.conj().T
    try:
        values = linalg.eigvalsh(wishart)
    except linalg.LinAlgError as exc:
        raise NumericalError(
            "Hermitian eigensolver did not converge", {"N": size, "reason": str(exc)}
        ) from exc
    # round-off can leave tiny negative eigenvalues of a PSD matrix
    values = np.clip(values, 0.0, None)
    return np.sort(size * values / values.sum())


def _draw(generator: np.random.Generator, N: int) -> np.ndarray:
    real = generator.standard_normal((N, N))
    imag = generator.standard_normal((N, N))
    return (real + 1j * imag) / math.sqrt(2.0)


def sample_spectrum(N: int, seed: int) -> EmpiricalSpectrum:
    """Draw one Haar-random reduced spectrum, reproducible from the seed"""
    _check_size(N)
    generator = make_generator(seed)
    return EmpiricalSpectrum(
        scaled_eigenvalues=wishart_spectrum(_draw(generator, N)), N=int(N), seed=seed
    )


def iter_spectra(N: int, samples: int, seed: int) -> Iterator[EmpiricalSpectrum]:
    """Independent spectra from one generator stream.

    Sample k is fully determined by (seed, k) because draws are consumed in
    order from a single counter-based stream.
    """
    _check_size(N)
    if samples < 1:
        raise DomainError("at least one sample is required", {"samples": samples})
    generator = make_generator(seed)
    for _ in range(samples):
        yield EmpiricalSpectrum(
            scaled_eigenvalues=wishart_spectrum(_draw(generator, N)), N=int(N), seed=seed
        )


def scaled_deficit(scaled_eigenvalues: ArrayLike, q: float) -> float:
    """ln N - S_q written in the scaled eigenvalues x = N lambda (mean one).

    ln((1/N) sum x^q) / (q - 1), and (1/N) sum x ln x at q = 1.
    """
    scaled = np.asarray(scaled_eigenvalues, dtype=float)
    if q <= 0 and np.any(scaled == 0):
        raise DomainError("zero eigenvalues make S_q undefined for q <= 0", {"q": q})
    if q == 1:
        return float(np.mean(special.xlogy(scaled, scaled)))
    return math.log(float(np.mean(scaled ** q))) / (q - 1)


def u_estimate(spectrum: EmpiricalSpectrum, q: float) -> float:
    """Entropy deficit ln N - S_q of an empirical spectrum"""
    return scaled_deficit(spectrum.scaled_eigenvalues, q)


def marchenko_pastur_cdf(x: ArrayLike) -> ArrayLike:
    """Cumulative Marcenko-Pastur law on [0, 4] in units of N lambda"""
    x_arr = np.clip(np.asarray(x, dtype=float), 0.0, 4.0)
    values = (
        np.sqrt(x_arr * (4.0 - x_arr)) + 4.0 * np.arcsin(np.sqrt(x_arr) / 2.0)
    ) / (2.0 * math.pi)
    return values if x_arr.ndim else float(values)


def marchenko_pastur_density(x: ArrayLike) -> ArrayLike:
    """(1/2 pi) sqrt((4 - x)/x) on (0, 4], zero elsewhere"""
    x_arr = np.asarray(x, dtype=float)
    inside = (x_arr > 0) & (x_arr <= 4.0)
    values = np.zeros_like(x_arr)
    values[inside] = np.sqrt((4.0 - x_arr[inside]) / x_arr[inside]) / (2.0 * math.pi)
    return values if x_arr.ndim else float(values)


def marchenko_pastur_quantiles(n: int) -> np.ndarray:
    """Midpoint quantiles F^-1((k - 1/2)/n) of the MP law, normalised to mean one"""
    theta = np.linspace(0.0, math.pi, 8193)
    support = 2.0 - 2.0 * np.cos(theta)
    levels = (np.arange(n) + 0.5) / n
    quantiles = np.interp(levels, marchenko_pastur_cdf(support), support)
    return quantiles / quantiles.mean()


def ks_versus_marchenko_pastur(scaled_eigenvalues: ArrayLike) -> float:
    """Kolmogorov-Smirnov distance of pooled scaled eigenvalues to the MP law"""
    return float(
        stats.kstest(np.ravel(scaled_eigenvalues), marchenko_pastur_cdf).statistic
    )


def pool(spectra: List[EmpiricalSpectrum]) -> np.ndarray:
    return np.sort(np.concatenate([s.scaled_eigenvalues for s in spectra]))
