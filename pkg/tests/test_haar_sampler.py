import math

import numpy as np
import pytest

from renyi_spectrum.critical import u_E
from renyi_spectrum.errors import DomainError
from renyi_spectrum.haar_sampler import (
    EmpiricalSpectrum,
    iter_spectra,
    ks_versus_marchenko_pastur,
    make_generator,
    marchenko_pastur_cdf,
    marchenko_pastur_density,
    marchenko_pastur_quantiles,
    pool,
    sample_spectrum,
    scaled_deficit,
    u_estimate,
    wishart_spectrum,
)


def test_sample_spectrum_is_normalised():
    spectrum = sample_spectrum(2, seed=7)
    assert spectrum.eigenvalues.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(spectrum.eigenvalues >= 0)
    assert np.all(np.diff(spectrum.scaled_eigenvalues) >= 0)


def test_sample_spectrum_is_reproducible():
    first = sample_spectrum(16, seed=3)
    second = sample_spectrum(16, seed=3)
    assert np.array_equal(first.scaled_eigenvalues, second.scaled_eigenvalues)
    assert not np.array_equal(
        first.scaled_eigenvalues, sample_spectrum(16, seed=4).scaled_eigenvalues
    )


def test_iter_spectra_first_sample_matches_single_draw():
    spectra = list(iter_spectra(8, 3, seed=11))
    assert len(spectra) == 3
    assert np.array_equal(
        spectra[0].scaled_eigenvalues, sample_spectrum(8, seed=11).scaled_eigenvalues
    )
    assert pool(spectra).shape == (24,)
    assert np.all(np.diff(pool(spectra)) >= 0)


def test_wishart_spectrum_is_scale_invariant():
    generator = make_generator(5)
    gaussian = generator.standard_normal((6, 6)) + 1j * generator.standard_normal((6, 6))
    assert wishart_spectrum(gaussian) == pytest.approx(
        wishart_spectrum(3.0 * gaussian), abs=1e-10
    )


@pytest.mark.parametrize(
    "given_scaled,given_q,expected_value",
    [
        (np.ones(10), 2.0, 0.0),
        (np.ones(10), 1.0, 0.0),
        (np.array([100.0] + [0.0] * 99), 2.0, math.log(100.0)),
        (np.array([100.0] + [0.0] * 99), 1.0, math.log(100.0)),
        (np.array([100.0] + [0.0] * 99), 0.5, math.log(100.0)),
    ],
)
def test_scaled_deficit(given_scaled, given_q, expected_value):
    assert scaled_deficit(given_scaled, given_q) == pytest.approx(expected_value, abs=1e-12)


def test_scaled_deficit_rejects_zero_eigenvalues_at_non_positive_order():
    with pytest.raises(DomainError):
        scaled_deficit(np.array([2.0, 0.0]), -1.0)


def test_u_estimate_uses_scaled_eigenvalues():
    spectrum = EmpiricalSpectrum(scaled_eigenvalues=np.array([0.5, 1.5]), N=2)
    assert u_estimate(spectrum, 2.0) == pytest.approx(math.log(1.25), abs=1e-12)


@pytest.mark.parametrize(
    "given_kwargs",
    [{"N": 1, "seed": 0}, {"N": 2.5, "seed": 0}, {"N": 4, "seed": -1}, {"N": 4, "seed": 2 ** 64}],
)
def test_sample_spectrum_validation(given_kwargs):
    with pytest.raises(DomainError):
        sample_spectrum(**given_kwargs)


def test_iter_spectra_needs_samples():
    with pytest.raises(DomainError):
        list(iter_spectra(4, 0, seed=1))


def test_marchenko_pastur_cdf():
    assert marchenko_pastur_cdf(0.0) == 0.0
    assert marchenko_pastur_cdf(4.0) == pytest.approx(1.0, abs=1e-12)
    assert marchenko_pastur_cdf(10.0) == pytest.approx(1.0, abs=1e-12)
    assert marchenko_pastur_cdf(1.0) == pytest.approx(
        (math.sqrt(3.0) + 4.0 * math.pi / 6.0) / (2.0 * math.pi), abs=1e-12
    )


def test_marchenko_pastur_density():
    values = marchenko_pastur_density(np.array([-1.0, 0.0, 1.0, 4.0, 5.0]))
    assert values == pytest.approx([0.0, 0.0, math.sqrt(3.0) / (2.0 * math.pi), 0.0, 0.0])


def test_marchenko_pastur_quantiles():
    quantiles = marchenko_pastur_quantiles(1000)
    assert quantiles.mean() == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(quantiles) > 0)
    assert quantiles[0] >= 0.0
    assert quantiles[-1] <= 4.0 + 1e-2


@pytest.mark.slow
def test_haar_spectra_follow_marchenko_pastur():
    spectra = list(iter_spectra(256, 100, seed=20190101))
    assert ks_versus_marchenko_pastur(pool(spectra)) < 0.05
    mean_u = float(np.mean([u_estimate(s, 2.0) for s in spectra]))
    assert mean_u == pytest.approx(math.log(2.0), abs=0.02)


@pytest.mark.slow
@pytest.mark.parametrize("given_q,given_tolerance", [(1.0, 0.02), (5.0, 0.05)])
def test_haar_deficit_sits_on_the_evaporation_line(given_q, given_tolerance):
    spectra = list(iter_spectra(256, 100, seed=20190101))
    mean_u = float(np.mean([u_estimate(s, given_q) for s in spectra]))
    assert mean_u == pytest.approx(u_E(given_q), abs=given_tolerance)


@pytest.mark.slow
@pytest.mark.parametrize("given_q", [1.0, 2.0, 5.0])
def test_haar_deficit_concentrates(given_q):
    spectra = list(iter_spectra(256, 100, seed=20190101))
    spread = float(np.std([u_estimate(s, given_q) for s in spectra], ddof=1))
    assert 0.0 < spread < 0.05
