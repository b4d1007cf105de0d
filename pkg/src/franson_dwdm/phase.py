"""Two-photon phase of a pair of unbalanced analyzer interferometers.

Each analyzer contributes an arm phase 2 pi DL n(lam) / lam; the two-photon
phase is the sum over the conjugate pair plus a global offset. Only the
reduced phase is observable (sub-wavelength piezo adjustments absorb whole
fringes), so results are reported in (-pi, pi]. The coincidence ports split
as (1 +- cos phi)/2 and the quantum bit error rate is sin^2(phi/2).
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _backend
from .dispersion import index_derivatives, refractive_index
from .source import conjugate_wavelength

TWO_PI = 2.0 * math.pi


def wrap_phase(phi):
    """Reduce a phase (scalar or array) to (-pi, pi]."""
    r = phi - TWO_PI * np.rint(np.asarray(phi, dtype=np.float64) / TWO_PI)
    r = np.where(r <= -math.pi, r + TWO_PI, r)
    r = np.where(r > math.pi, r - TWO_PI, r)
    return float(r) if np.ndim(phi) == 0 else r


@dataclass(frozen=True)
class InterferometerPair:
    """The two analyzers: Bob's arm-length difference, Alice's detuning.

    Alice's arm-length difference is path_diff_b_m + detuning_m. The global
    offset phase_offset_rad lives in [-pi, pi]; when calibration_wavelength_nm
    is set, the raw phase at that wavelength is subtracted, so the reduced
    phase there equals the offset exactly.
    """

    fiber: object
    path_diff_b_m: float = 0.067
    detuning_m: float = 0.0
    phase_offset_rad: float = 0.0
    calibration_wavelength_nm: float = None

    def __post_init__(self):
        if self.path_diff_b_m <= 0 or self.path_diff_a_m <= 0:
            raise ValueError("both arm-length differences must be positive")
        if not -math.pi <= self.phase_offset_rad <= math.pi:
            raise ValueError("phase_offset_rad must lie in [-pi, pi]")
        if self.calibration_wavelength_nm is not None:
            self.fiber.check_wavelength(self.calibration_wavelength_nm)

    @property
    def path_diff_a_m(self):
        return self.path_diff_b_m + self.detuning_m


@dataclass(frozen=True)
class AnalysisBasis:
    """Ekert analysis basis: Z sums the arm phases to 0, X to pi."""

    basis_id: str

    def __post_init__(self):
        if self.basis_id not in ("Z", "X"):
            raise ValueError("basis_id must be 'Z' or 'X'")

    @property
    def target_sum_rad(self):
        return 0.0 if self.basis_id == "Z" else math.pi


def calibrated(interf, lam_nm, reset_offset=True):
    """Return a copy calibrated at lam_nm (reduced phase zeroed there).

    Calibrating an already calibrated pair at the same wavelength is a
    no-op for the offset.
    """
    kwargs = {"calibration_wavelength_nm": float(lam_nm)}
    if reset_offset:
        kwargs["phase_offset_rad"] = 0.0
    return replace(interf, **kwargs)


def arm_phase(fiber, lam_nm, dl_m):
    """Unwrapped single-arm phase 2 pi DL n(lam) / lam."""
    if np.any(np.asarray(dl_m) < 0):
        raise ValueError("arm-length difference must be non-negative")
    n = refractive_index(fiber, lam_nm)
    lam_m = np.asarray(lam_nm, dtype=np.float64) * 1e-9
    out = TWO_PI * dl_m * n / lam_m
    return float(out) if np.ndim(lam_nm) == 0 else out


def raw_two_photon_phase(interf, lam_p_nm, lam_a_nm):
    """Unreduced phase sum over the conjugate pair (no offset, no reference)."""
    lam_a = np.asarray(lam_a_nm, dtype=np.float64)
    if np.any(lam_a <= lam_p_nm):
        raise ValueError("lam_a must exceed the pump wavelength")
    fiber = interf.fiber
    fiber.check_wavelength(lam_a)
    fiber.check_wavelength(conjugate_wavelength(lam_p_nm, lam_a))
    out = _backend.pair_raw_phase(lam_a, float(lam_p_nm),
                                  interf.path_diff_a_m, interf.path_diff_b_m,
                                  fiber.strengths, fiber.resonances_um2)
    return float(out) if np.ndim(lam_a_nm) == 0 else out


def two_photon_phase(interf, lam_p_nm, lam_a_nm):
    """Reduced two-photon phase in (-pi, pi] at the Alice wavelength(s)."""
    raw = raw_two_photon_phase(interf, lam_p_nm, lam_a_nm)
    if interf.calibration_wavelength_nm is not None:
        ref = raw_two_photon_phase(interf, lam_p_nm,
                                   interf.calibration_wavelength_nm)
        raw = raw - ref
    return wrap_phase(raw + interf.phase_offset_rad)


def balanced_phase_approx(fiber, lam_p_nm, lam_a_nm, dl_m):
    """Second-order model of the balanced-analyzer phase (constant dropped).

    d2n/dlam2 is evaluated at the degenerate wavelength 2 lam_p; the
    wavelength-independent fringe constant is absorbed into the offset and
    therefore not returned.
    """
    lam_a = np.asarray(lam_a_nm, dtype=np.float64)
    if np.any(lam_a <= lam_p_nm):
        raise ValueError("lam_a must exceed the pump wavelength")
    _, _, d2n_um2 = index_derivatives(fiber, 2.0 * lam_p_nm)
    d2n_m2 = float(d2n_um2) * 1e12
    delta_m = (lam_a - 2.0 * lam_p_nm) * 1e-9
    den_m = (lam_a - lam_p_nm) * 1e-9
    out = d2n_m2 * math.pi * delta_m ** 2 / den_m * dl_m
    return float(out) if np.ndim(lam_a_nm) == 0 else out


def qber_from_phase(phi):
    """QBER = sin^2(phi/2)."""
    out = np.sin(np.asarray(phi, dtype=np.float64) / 2.0) ** 2
    return float(out) if np.ndim(phi) == 0 else out


def phase_from_qber(q, sign=1.0):
    """Principal-branch inverse of the QBER law: sign * 2 asin(sqrt(q))."""
    q_arr = np.asarray(q, dtype=np.float64)
    if np.any(q_arr < 0.0) or np.any(q_arr > 1.0):
        raise ValueError("QBER must lie in [0, 1]")
    out = sign * 2.0 * np.arcsin(np.sqrt(q_arr))
    return float(out) if np.ndim(q) == 0 else out


def coincidence_probabilities(phi):
    """Port probabilities ((1 + cos phi)/2, (1 - cos phi)/2), summing to 1."""
    p1 = 0.5 * (1.0 + np.cos(np.asarray(phi, dtype=np.float64)))
    p2 = 1.0 - p1
    if np.ndim(phi) == 0:
        return float(p1), float(p2)
    return p1, p2


def second_basis(interf, lam_p_nm, band_nm, samples=2001):
    """Arm-length increment for the pi-shifted basis and its error bound.

    The increment lam_p / (2 n0) adds pi/2 per arm at the degenerate
    wavelength. Away from it, dispersion perturbs the pi shift; the maximum
    deviation |phi' - phi - pi| over the band is returned alongside the
    increment.
    """
    n0 = refractive_index(interf.fiber, 2.0 * lam_p_nm)
    increment_m = lam_p_nm * 1e-9 / (2.0 * n0)
    lam = np.linspace(band_nm[0], band_nm[1], samples)
    base = raw_two_photon_phase(interf, lam_p_nm, lam)
    shifted = replace(interf, path_diff_b_m=interf.path_diff_b_m + increment_m)
    raw_shifted = raw_two_photon_phase(shifted, lam_p_nm, lam)
    max_err = float(np.abs(raw_shifted - base - math.pi).max())
    return increment_m, max_err
