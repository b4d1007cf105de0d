"""Photon-pair source model.

Energy conservation ties the two wavelengths of a pair to the pump:
1/lam_p = 1/lam_A + 1/lam_B, so pairs appear symmetrically around the
degenerate wavelength 2 lam_p. The emission spectrum is modelled as either
a sinc^2 main lobe (quasi-phase-matched sources) or a Gaussian, with a
configurable FWHM; the Monte Carlo sampler draws the long-wavelength
(Alice) photon from the corresponding marginal by inverse-CDF lookup.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Abscissa where (sin x / x)^2 = 1/2; the sinc^2 main lobe ends at pi.
_SINC2_HALF_POWER_X = 1.39155737825151
_GAUSSIAN_SUPPORT_SIGMAS = 4.0
_CDF_TABLE_POINTS = 4001


@dataclass(frozen=True)
class SourceSpec:
    """Source configuration; wavelengths in nm."""

    pump_wavelength_nm: float = 770.0
    spectral_shape: str = "sinc2"
    fwhm_bandwidth_nm: float = 55.0
    usable_band_nm: tuple = (1541.0, 1579.0)

    def __post_init__(self):
        if self.pump_wavelength_nm <= 0:
            raise ValueError("pump_wavelength_nm must be positive")
        if self.spectral_shape not in ("sinc2", "gaussian"):
            raise ValueError(f"unknown spectral_shape {self.spectral_shape!r}"
                             " (expected 'sinc2' or 'gaussian')")
        if self.fwhm_bandwidth_nm < 0:
            raise ValueError("fwhm_bandwidth_nm must be non-negative")
        if self.usable_band_nm is not None:
            lo, hi = self.usable_band_nm
            if not (self.pump_wavelength_nm < lo <= hi):
                raise ValueError("usable_band_nm must lie strictly above the "
                                 "pump wavelength with lo <= hi")
            object.__setattr__(self, "usable_band_nm", (float(lo), float(hi)))

    @property
    def degenerate_wavelength_nm(self):
        return 2.0 * self.pump_wavelength_nm

    @property
    def support_nm(self):
        """Interval outside which the spectral density is exactly zero."""
        center = self.degenerate_wavelength_nm
        if self.fwhm_bandwidth_nm == 0:
            return (center, center)
        if self.spectral_shape == "sinc2":
            half = self.fwhm_bandwidth_nm / 2.0 * np.pi / _SINC2_HALF_POWER_X
        else:
            sigma = self.fwhm_bandwidth_nm / (2.0 * np.sqrt(2.0 * np.log(2.0)))
            half = _GAUSSIAN_SUPPORT_SIGMAS * sigma
        return (center - half, center + half)


@dataclass(frozen=True)
class PhotonPair:
    """One conjugate pair; lam_a is the long-wavelength (Alice) photon."""

    lam_a_nm: float
    lam_b_nm: float


def conjugate_wavelength(lam_p_nm, lam_a_nm):
    """Partner wavelength from energy conservation, 1/p = 1/a + 1/b."""
    lam_a = np.asarray(lam_a_nm, dtype=np.float64)
    if np.any(lam_a <= lam_p_nm):
        raise ValueError("lam_a must exceed the pump wavelength; no physical "
                         "conjugate exists otherwise")
    out = 1.0 / (1.0 / lam_p_nm - 1.0 / lam_a)
    return float(out) if np.ndim(lam_a_nm) == 0 else out


def _shape_values(spec, lam):
    """Unnormalized spectral shape evaluated at lam (array, nm)."""
    center = spec.degenerate_wavelength_nm
    lo, hi = spec.support_nm
    out = np.zeros_like(lam)
    inside = (lam >= lo) & (lam <= hi)
    if spec.spectral_shape == "sinc2":
        x = (lam[inside] - center) * (_SINC2_HALF_POWER_X / (spec.fwhm_bandwidth_nm / 2.0))
        val = np.ones_like(x)
        nz = x != 0
        val[nz] = (np.sin(x[nz]) / x[nz]) ** 2
        out[inside] = val
    else:
        sigma = spec.fwhm_bandwidth_nm / (2.0 * np.sqrt(2.0 * np.log(2.0)))
        out[inside] = np.exp(-0.5 * ((lam[inside] - center) / sigma) ** 2)
    return out


@lru_cache(maxsize=32)
def _normalization(spec):
    lo, hi = spec.support_nm
    grid = np.linspace(lo, hi, 20001)
    vals = _shape_values(spec, grid)
    return float(np.trapezoid(vals, grid))


def spectral_density(spec, lam_nm):
    """Normalized emission density (per nm); zero outside the support."""
    if spec.fwhm_bandwidth_nm == 0:
        raise ValueError("spectral_density is undefined for zero bandwidth")
    lam = np.atleast_1d(np.asarray(lam_nm, dtype=np.float64))
    out = _shape_values(spec, lam) / _normalization(spec)
    return float(out[0]) if np.ndim(lam_nm) == 0 else out


@lru_cache(maxsize=64)
def _alice_cdf_table(spec, restrict):
    """(grid, cdf) for inverse-CDF sampling of the Alice-side marginal.

    The marginal is the emission density conditioned on lam >= 2 lam_p,
    optionally further restricted to a wavelength window (used to confine
    sampling to a channel pair's passband).
    """
    lo_s, hi_s = spec.support_nm
    lo = max(spec.degenerate_wavelength_nm, lo_s)
    hi = hi_s
    if restrict is not None:
        lo = max(lo, restrict[0])
        hi = min(hi, restrict[1])
    if not lo < hi:
        raise ValueError("sampling window is empty or outside the source support")
    grid = np.linspace(lo, hi, _CDF_TABLE_POINTS)
    pdf = _shape_values(spec, grid)
    cdf = np.concatenate([[0.0], np.cumsum((pdf[1:] + pdf[:-1]) / 2.0 * np.diff(grid))])
    if cdf[-1] <= 0:
        raise ValueError("spectral density vanishes on the sampling window")
    cdf /= cdf[-1]
    return grid, cdf


def sample_alice_wavelengths(spec, rng, n, restrict=None):
    """Draw n Alice wavelengths; deterministic given the rng state."""
    if spec.fwhm_bandwidth_nm == 0:
        rng.random(n)  # keep the stream layout shape-independent
        return np.full(n, spec.degenerate_wavelength_nm)
    grid, cdf = _alice_cdf_table(spec, restrict)
    return np.interp(rng.random(n), cdf, grid)


def sample_pair(spec, rng):
    """Draw one PhotonPair; lam_b follows from energy conservation."""
    lam_a = float(sample_alice_wavelengths(spec, rng, 1)[0])
    if lam_a == spec.degenerate_wavelength_nm:
        return PhotonPair(lam_a, lam_a)
    return PhotonPair(lam_a, conjugate_wavelength(spec.pump_wavelength_nm, lam_a))


def emission_band(spec):
    """Usable Alice band: the configured band, else the FWHM-derived one."""
    if spec.usable_band_nm is not None:
        return spec.usable_band_nm
    center = spec.degenerate_wavelength_nm
    return (center, center + spec.fwhm_bandwidth_nm / 2.0)
