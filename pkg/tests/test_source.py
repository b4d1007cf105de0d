"""Energy-conservation pairing, spectral density, pair sampling."""

import numpy as np
import pytest
from scipy import integrate, stats

from franson_dwdm import (SourceSpec, conjugate_wavelength, emission_band,
                          sample_pair, spectral_density)
from franson_dwdm.source import sample_alice_wavelengths


def test_conjugate_degeneracy():
    assert conjugate_wavelength(770.0, 1540.0) == pytest.approx(1540.0, rel=1e-14)


def test_conjugate_known_pairs():
    assert conjugate_wavelength(770.0, 1553.0) == pytest.approx(1527.2, abs=0.1)
    assert conjugate_wavelength(770.0, 1560.0) == pytest.approx(1520.506, abs=0.01)


def test_conjugate_domain_error():
    with pytest.raises(ValueError):
        conjugate_wavelength(770.0, 700.0)
    with pytest.raises(ValueError):
        conjugate_wavelength(770.0, 770.0)


def test_conjugate_involution_and_monotonicity():
    lam = np.linspace(1490.0, 1650.0, 500)
    back = conjugate_wavelength(770.0, conjugate_wavelength(770.0, lam))
    assert np.all(np.abs(back - lam) / lam < 1e-12)
    conj = conjugate_wavelength(770.0, lam)
    assert np.all(np.diff(conj) < 0)


def test_density_peaks_at_degeneracy(default_source):
    lam = np.linspace(1480.0, 1600.0, 4001)
    dens = spectral_density(default_source, lam)
    assert lam[np.argmax(dens)] == pytest.approx(1540.0, abs=0.05)
    assert spectral_density(default_source, 1540.0) >= dens.max() - 1e-12


@pytest.mark.parametrize("shape", ["sinc2", "gaussian"])
def test_density_half_power_at_fwhm(shape):
    spec = SourceSpec(spectral_shape=shape)
    peak = spectral_density(spec, 1540.0)
    for lam in (1540.0 - 27.5, 1540.0 + 27.5):
        assert spectral_density(spec, lam) == pytest.approx(0.5 * peak, rel=1e-9)


@pytest.mark.parametrize("shape", ["sinc2", "gaussian"])
def test_density_normalization(shape):
    spec = SourceSpec(spectral_shape=shape)
    lo, hi = spec.support_nm
    val, _ = integrate.quad(lambda x: spectral_density(spec, x), lo, hi,
                            limit=200)
    assert val == pytest.approx(1.0, abs=1e-6)


def test_density_zero_outside_support(default_source):
    lo, hi = default_source.support_nm
    assert spectral_density(default_source, lo - 1.0) == 0.0
    assert spectral_density(default_source, hi + 1.0) == 0.0


def test_sampling_is_deterministic(default_source):
    a = [sample_pair(default_source, np.random.default_rng(42)) for _ in range(5)]
    b = [sample_pair(default_source, np.random.default_rng(42)) for _ in range(5)]
    assert a[0] == b[0]
    rng1, rng2 = np.random.default_rng(7), np.random.default_rng(7)
    seq1 = [sample_pair(default_source, rng1) for _ in range(20)]
    seq2 = [sample_pair(default_source, rng2) for _ in range(20)]
    assert seq1 == seq2


def test_samples_conserve_energy(default_source):
    rng = np.random.default_rng(3)
    for _ in range(200):
        pair = sample_pair(default_source, rng)
        lhs = 1.0 / 770.0
        rhs = 1.0 / pair.lam_a_nm + 1.0 / pair.lam_b_nm
        assert abs(lhs - rhs) / lhs < 1e-12
        assert pair.lam_a_nm >= 1540.0


def test_sample_histogram_fwhm(default_source):
    rng = np.random.default_rng(12345)
    lam_a = sample_alice_wavelengths(default_source, rng, 10 ** 6)
    lam_b = conjugate_wavelength(770.0, lam_a)
    both = np.concatenate([lam_a, lam_b])
    counts, edges = np.histogram(both, bins=400)
    centers = (edges[1:] + edges[:-1]) / 2.0
    above = centers[counts >= counts.max() / 2.0]
    fwhm = above.max() - above.min()
    assert fwhm == pytest.approx(55.0, abs=2.0)


def test_sampler_matches_density(default_source):
    """Goodness of fit of the sampler against an independent CDF oracle."""
    rng = np.random.default_rng(2026)
    samples = sample_alice_wavelengths(default_source, rng, 10 ** 6)
    lo, hi = default_source.support_nm
    grid = np.linspace(1540.0, hi, 20001)
    pdf = spectral_density(default_source, grid)
    cdf = np.concatenate([[0.0], np.cumsum((pdf[1:] + pdf[:-1]) / 2.0
                                           * np.diff(grid))])
    cdf /= cdf[-1]
    result = stats.kstest(samples, lambda x: np.interp(x, grid, cdf))
    assert result.pvalue > 0.01


def test_emission_band_variants():
    assert emission_band(SourceSpec()) == (1541.0, 1579.0)
    assert emission_band(SourceSpec(fwhm_bandwidth_nm=0.0,
                                    usable_band_nm=None)) == (1540.0, 1540.0)
    assert emission_band(SourceSpec(usable_band_nm=None)) == (1540.0, 1567.5)


def test_degenerate_wavelength_is_twice_pump():
    spec = SourceSpec(pump_wavelength_nm=775.0, usable_band_nm=(1551.0, 1600.0))
    assert spec.degenerate_wavelength_nm == 1550.0


def test_invalid_specs_rejected():
    with pytest.raises(ValueError):
        SourceSpec(spectral_shape="boxcar")
    with pytest.raises(ValueError):
        SourceSpec(usable_band_nm=(500.0, 1600.0))
    with pytest.raises(ValueError):
        SourceSpec(pump_wavelength_nm=-1.0)
