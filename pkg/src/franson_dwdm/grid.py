"""ITU DWDM channel grid arithmetic and conjugate channel pairing.

All grid math runs in GHz, where the ITU anchor (193100 GHz) and spacings
(100, 50, 25, 12.5 GHz) are exact binary floats; wavelengths only appear at
the interfaces. Channel pairs are symmetric in frequency about the pump:
for an Alice channel at nu_A the partner is the grid channel nearest to
nu_p - nu_A, with the residual recorded as frequency_sum_error.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .constants import C_NM_GHZ
from .phase import qber_from_phase, two_photon_phase


@dataclass(frozen=True)
class GridSpec:
    """Uniform frequency grid: anchor (THz), spacing and passband (GHz).

    The ITU plans use spacings of 100, 50, 25 or 12.5 GHz on the 193.1 THz
    anchor; any positive spacing is accepted for custom plans.
    """

    anchor_thz: float = 193.1
    spacing_ghz: float = 100.0
    passband_ghz: float = None

    def __post_init__(self):
        if self.spacing_ghz <= 0:
            raise ValueError("spacing_ghz must be positive")
        if self.passband_ghz is None:
            object.__setattr__(self, "passband_ghz", float(self.spacing_ghz))
        if not 0 < self.passband_ghz <= self.spacing_ghz:
            raise ValueError("passband_ghz must satisfy 0 < passband <= spacing")

    @property
    def anchor_ghz(self):
        # Resolve the anchor to an exact GHz value (sub-MHz anchors are not
        # meaningful for ITU plans and would defeat exact grid arithmetic).
        return round(self.anchor_thz * 1000.0, 6)


@dataclass(frozen=True)
class Channel:
    """One grid channel; index is the signed offset from the anchor."""

    index: int
    center_frequency_ghz: float
    passband_ghz: float

    @property
    def center_frequency_thz(self):
        return self.center_frequency_ghz / 1000.0

    @property
    def center_wavelength_nm(self):
        return C_NM_GHZ / self.center_frequency_ghz

    @property
    def passband_nm(self):
        lo = C_NM_GHZ / (self.center_frequency_ghz + self.passband_ghz / 2.0)
        hi = C_NM_GHZ / (self.center_frequency_ghz - self.passband_ghz / 2.0)
        return (lo, hi)


@dataclass(frozen=True)
class ChannelPair:
    """Alice/Bob channel pair with its phase evaluation results.

    worst_phase_rad, worst_qber and passes stay None until the pair has
    been evaluated by count_passing_pairs.
    """

    alice: Channel
    bob: Channel
    pump_wavelength_nm: float
    frequency_sum_error_ghz: float
    worst_phase_rad: float = None
    worst_qber: float = None
    passes: bool = None

    @property
    def misaligned(self):
        return self.frequency_sum_error_ghz > self.alice.passband_ghz / 2.0


def channel_at(grid, index):
    nu = grid.anchor_ghz + index * grid.spacing_ghz
    return Channel(index=int(index), center_frequency_ghz=nu,
                   passband_ghz=grid.passband_ghz)


def nearest_channel_index(grid, nu_ghz):
    return int(round((nu_ghz - grid.anchor_ghz) / grid.spacing_ghz))


def channels_in_band(grid, band_nm):
    """All channels whose center wavelength falls inside band_nm.

    Returned in ascending index order (ascending frequency, so descending
    wavelength). An empty band yields an empty list.
    """
    lo_nm, hi_nm = band_nm
    if not lo_nm < hi_nm:
        return []
    nu_lo = C_NM_GHZ / hi_nm
    nu_hi = C_NM_GHZ / lo_nm
    k_min = math.ceil((nu_lo - grid.anchor_ghz) / grid.spacing_ghz - 1e-12)
    k_max = math.floor((nu_hi - grid.anchor_ghz) / grid.spacing_ghz + 1e-12)
    return [channel_at(grid, k) for k in range(k_min, k_max + 1)]


def pair_channels(grid, lam_p_nm, alice_band_nm):
    """ChannelPairs for every Alice channel in the band.

    Alice is the long-wavelength (low-frequency) side; the band may extend
    down to the degenerate wavelength but not below it, so
    alice.center_frequency <= bob.center_frequency always holds after
    nearest-grid snapping of the conjugate.
    """
    nu_p = C_NM_GHZ / lam_p_nm
    half_channel_nm = (C_NM_GHZ / (nu_p / 2.0 - grid.spacing_ghz / 2.0)
                       - C_NM_GHZ / (nu_p / 2.0))
    if alice_band_nm[0] < 2.0 * lam_p_nm - half_channel_nm:
        raise ValueError("alice_band must lie on the long-wavelength side of "
                         "the degenerate wavelength")
    pairs = []
    for alice in channels_in_band(grid, alice_band_nm):
        k_bob = nearest_channel_index(grid, nu_p - alice.center_frequency_ghz)
        bob = channel_at(grid, k_bob)
        err = abs(alice.center_frequency_ghz + bob.center_frequency_ghz - nu_p)
        if alice.center_frequency_ghz > bob.center_frequency_ghz:
            alice, bob = bob, alice
        pairs.append(ChannelPair(alice=alice, bob=bob,
                                 pump_wavelength_nm=float(lam_p_nm),
                                 frequency_sum_error_ghz=err))
    return pairs


def evaluation_wavelengths(pair, edge_rule):
    """Alice wavelengths at which a pair's phase is probed."""
    if edge_rule == "center":
        return [pair.alice.center_wavelength_nm]
    if edge_rule == "edges":
        lo, hi = pair.alice.passband_nm
        return [pair.alice.center_wavelength_nm, lo, hi]
    raise ValueError(f"unknown edge_rule {edge_rule!r} (expected 'center' or 'edges')")


def count_passing_pairs(pairs, interf, threshold_phase, edge_rule="center"):
    """Worst-case phase per pair and the number passing the threshold.

    The phase is evaluated at each pair's probe wavelengths (channel center,
    optionally plus both passband edges) with the exact conjugate partner;
    a pair passes when max |phi| stays within threshold_phase.
    """
    if not pairs:
        return 0, []
    lam_eval = []
    group = []
    for i, pair in enumerate(pairs):
        for lam in evaluation_wavelengths(pair, edge_rule):
            lam_eval.append(lam)
            group.append(i)
    phi = two_photon_phase(interf, pairs[0].pump_wavelength_nm,
                           np.asarray(lam_eval))
    worst = np.zeros(len(pairs))
    np.maximum.at(worst, np.asarray(group), np.abs(phi))
    annotated = []
    count = 0
    for pair, w in zip(pairs, worst):
        ok = bool(w <= threshold_phase)
        count += ok
        annotated.append(replace(pair, worst_phase_rad=float(w),
                                 worst_qber=qber_from_phase(float(w)),
                                 passes=ok))
    return count, annotated
