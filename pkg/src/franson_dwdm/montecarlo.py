"""Event-level Monte Carlo of coincidence counting.

Each generated pair draws five uniforms in a fixed order (wavelength,
Alice detection, Bob detection, post-selection, port choice), so a run is
fully reproducible from its seed, independent of internal chunking. The
interfering short-short plus long-long class survives post-selection with
probability 1/2; surviving events land in port 1 with probability
(1 + cos phi)/2 at the pair's two-photon phase. Runs can be sharded into
independent substreams (spawned from the master seed) whose counts merge
by summation.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .constants import C_NM_GHZ
from .errors import InsufficientStatisticsError
from .phase import two_photon_phase
from .source import _alice_cdf_table, conjugate_wavelength

_CHUNK = 1_000_000


@dataclass(frozen=True)
class DetectorModel:
    efficiency: float
    dark_count_probability_per_window: float = 0.0

    def __post_init__(self):
        for name in ("efficiency", "dark_count_probability_per_window"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


@dataclass(frozen=True)
class ExperimentConfig:
    """One simulation run.

    channel_filter restricts wavelength sampling to a single pair's
    passbands; channel_plan (with its grid) enables the per-channel
    breakdown of an unfiltered run; forced_phase_rad overrides the
    wavelength-dependent phase with a constant, for calibration studies.
    """

    source: object
    interf: object
    detectors: tuple = (DetectorModel(1.0), DetectorModel(1.0))
    pairs_generated: int = 1_000_000
    seed: int = 0
    shards: int = 1
    channel_filter: object = None
    channel_plan: tuple = None
    grid: object = None
    forced_phase_rad: float = None

    def __post_init__(self):
        if self.pairs_generated <= 0:
            raise ValueError("pairs_generated must be positive")
        if self.shards < 1:
            raise ValueError("shards must be >= 1")
        if self.channel_plan is not None and self.grid is None:
            raise ValueError("channel_plan requires the grid it was built from")


@dataclass(frozen=True)
class PerChannelTally:
    post_selected: int
    counts_port1: int
    counts_port2: int
    qber: float
    sigma: float


@dataclass(frozen=True)
class TallyResult:
    pairs_generated: int
    detected: int
    post_selected: int
    counts_port1: int
    counts_port2: int
    qber_estimate: float
    qber_sigma: float
    seed: int
    per_channel: dict = field(default_factory=dict)


def _qber_and_sigma(n1, n2):
    total = n1 + n2
    if total == 0:
        raise InsufficientStatisticsError("no post-selected events")
    q = n2 / total
    if n2 == 0:
        return 0.0, 1.0 / (n1 + 2)      # one-sided zero-error bound
    if n1 == 0:
        return 1.0, 1.0 / (n2 + 2)      # mirrored bound at the other corner
    return q, math.sqrt(q * (1.0 - q) / total)


def estimate_qber(tally):
    """(qber, sigma) from a tally's port counts; binomial standard error."""
    return _qber_and_sigma(tally.counts_port1, tally.counts_port2)


def _sampling_window(config):
    """Wavelength window for lam_A when a channel filter is active."""
    pair = config.channel_filter
    if pair is None:
        return None
    lam_p = config.source.pump_wavelength_nm
    a_lo, a_hi = pair.alice.passband_nm
    b_lo, b_hi = pair.bob.passband_nm
    lo = max(a_lo, conjugate_wavelength(lam_p, b_hi) if b_hi > lam_p else a_lo)
    hi = min(a_hi, conjugate_wavelength(lam_p, b_lo) if b_lo > lam_p else a_hi)
    lo = max(lo, config.source.degenerate_wavelength_nm)
    if not lo < hi:
        raise ValueError("channel filter does not overlap the source band")
    return (lo, hi)


def _channel_slots(config):
    """Map from grid index to plan position for the breakdown."""
    plan = config.channel_plan
    index_of = {}
    for slot, pair in enumerate(plan):
        index_of[pair.alice.index] = slot
    return index_of


def simulate(config):
    """Run the cascade and tally coincidences per port (and per channel)."""
    source = config.source
    interf = config.interf
    det_a, det_b = config.detectors
    eta_a, eta_b = det_a.efficiency, det_b.efficiency
    p_acc = (det_a.dark_count_probability_per_window
             * det_b.dark_count_probability_per_window)
    lam_p = source.pump_wavelength_nm
    window = _sampling_window(config)

    breakdown = (config.channel_plan is not None
                 and len(config.channel_plan) > 0
                 and config.channel_filter is None)
    if breakdown:
        slots = _channel_slots(config)
        n_chan = len(config.channel_plan)
        grid = config.grid
        slot_lookup = np.full(max(slots) - min(slots) + 1, -1, dtype=np.int64)
        k_base = min(slots)
        for k, pos in slots.items():
            slot_lookup[k - k_base] = pos
    else:
        n_chan = 0

    if config.forced_phase_rad is not None:
        p1_const = 0.5 * (1.0 + math.cos(config.forced_phase_rad))

    shard_sizes = [config.pairs_generated // config.shards] * config.shards
    for i in range(config.pairs_generated % config.shards):
        shard_sizes[i] += 1
    children = np.random.SeedSequence(config.seed).spawn(config.shards)

    n_det = n_post = n_p1 = 0
    per_post = np.zeros(n_chan, dtype=np.int64)
    per_p1 = np.zeros(n_chan, dtype=np.int64)

    for size, child in zip(shard_sizes, children):
        rng = np.random.default_rng(child)
        remaining = size
        while remaining > 0:
            m = min(remaining, _CHUNK)
            remaining -= m
            u = rng.random((m, 5))
            lam_a = _draw_wavelengths(source, u[:, 0], window)
            if config.forced_phase_rad is not None:
                p1 = np.full(m, p1_const)
            else:
                phi = two_photon_phase(interf, lam_p, lam_a)
                p1 = 0.5 * (1.0 + np.cos(phi))
            if n_chan > 0:
                nu = C_NM_GHZ / lam_a
                k = np.rint((nu - grid.anchor_ghz) / grid.spacing_ghz).astype(np.int64)
                center = grid.anchor_ghz + k * grid.spacing_ghz
                in_pb = np.abs(nu - center) <= grid.passband_ghz / 2.0
                rel = k - k_base
                valid = in_pb & (rel >= 0) & (rel < slot_lookup.shape[0])
                chan = np.full(m, -1, dtype=np.int64)
                chan[valid] = slot_lookup[rel[valid]]
            else:
                chan = np.full(m, -1, dtype=np.int64)
            d, p, p1c, pp, pq = _backend.mc_cascade(
                u[:, 1], u[:, 2], u[:, 3], u[:, 4], eta_a, eta_b, p1,
                chan, n_chan)
            n_det += d
            n_post += p
            n_p1 += p1c
            if n_chan > 0:
                per_post += pp
                per_p1 += pq
            if p_acc > 0.0:
                u_dark = rng.random((m, 2))
                acc = u_dark[:, 0] < p_acc
                n_acc = int(acc.sum())
                acc_p1 = int((acc & (u_dark[:, 1] < 0.5)).sum())
                n_post += n_acc
                n_p1 += acc_p1

    n_p2 = n_post - n_p1
    if n_post > 0:
        q, sig = _qber_and_sigma(n_p1, n_p2)
    else:
        q, sig = float("nan"), float("nan")

    per_channel = {}
    if n_chan > 0:
        for slot, pair in enumerate(config.channel_plan):
            tot = int(per_post[slot])
            c1 = int(per_p1[slot])
            c2 = tot - c1
            if tot > 0:
                cq, cs = _qber_and_sigma(c1, c2)
            else:
                cq, cs = float("nan"), float("nan")
            per_channel[pair.alice.index] = PerChannelTally(tot, c1, c2, cq, cs)

    return TallyResult(
        pairs_generated=config.pairs_generated, detected=n_det,
        post_selected=n_post, counts_port1=n_p1, counts_port2=n_p2,
        qber_estimate=q, qber_sigma=sig, seed=config.seed,
        per_channel=per_channel)


def _draw_wavelengths(source, uniforms, window):
    """Inverse-CDF wavelength lookup on pre-drawn uniforms."""
    if source.fwhm_bandwidth_nm == 0:
        return np.full(uniforms.shape[0], source.degenerate_wavelength_nm)
    grid, cdf = _alice_cdf_table(source, window)
    return np.interp(uniforms, cdf, grid)
