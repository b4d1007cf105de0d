"""Event-level coincidence simulation and QBER estimation."""

import math

import pytest

from franson_dwdm import (DetectorModel, ExperimentConfig,
                          InterferometerPair, SourceSpec, calibrated,
                          estimate_qber, pair_channels, simulate)
from franson_dwdm.errors import InsufficientStatisticsError
from franson_dwdm.montecarlo import TallyResult

Q_TRUE = math.sin(0.07) ** 2


def base_config(smf, **kw):
    interf = calibrated(InterferometerPair(fiber=smf, path_diff_b_m=0.067),
                        1540.0)
    defaults = dict(source=SourceSpec(), interf=interf,
                    detectors=(DetectorModel(0.2), DetectorModel(0.25)),
                    pairs_generated=10 ** 5, seed=0)
    defaults.update(kw)
    return ExperimentConfig(**defaults)


def test_zero_phase_perfect_detectors_yield_no_errors(smf):
    cfg = base_config(smf, detectors=(DetectorModel(1.0), DetectorModel(1.0)),
                      forced_phase_rad=0.0)
    tally = simulate(cfg)
    assert tally.counts_port2 == 0
    assert tally.qber_estimate == 0.0
    assert tally.detected == tally.pairs_generated


def test_counts_are_consistent(smf):
    tally = simulate(base_config(smf))
    assert tally.counts_port1 + tally.counts_port2 == tally.post_selected
    assert tally.post_selected <= tally.detected <= tally.pairs_generated


def test_fixed_seed_reproducibility(smf):
    a = simulate(base_config(smf, seed=123))
    b = simulate(base_config(smf, seed=123))
    assert a == b
    c = simulate(base_config(smf, seed=124))
    assert c != a


def test_paper_efficiencies_converge_to_qber_law(smf):
    cfg = base_config(smf, pairs_generated=10 ** 6, forced_phase_rad=0.14,
                      seed=0)
    tally = simulate(cfg)
    assert abs(tally.qber_estimate - Q_TRUE) < 3.0 * tally.qber_sigma


def test_detected_fraction_matches_efficiency_product(smf):
    tally = simulate(base_config(smf, pairs_generated=10 ** 6))
    n = tally.pairs_generated
    p = 0.2 * 0.25
    sigma = math.sqrt(p * (1 - p) / n)
    assert abs(tally.detected / n - p) < 3.0 * sigma
    # post-selection keeps about half of the detected coincidences
    sigma_ps = math.sqrt(0.25 / tally.detected)
    assert abs(tally.post_selected / tally.detected - 0.5) < 3.0 * sigma_ps


def test_estimate_qber_corner_cases():
    t = TallyResult(pairs_generated=1, detected=1, post_selected=1000,
                    counts_port1=1000, counts_port2=0, qber_estimate=0.0,
                    qber_sigma=0.0, seed=0)
    q, sigma = estimate_qber(t)
    assert q == 0.0
    assert sigma == pytest.approx(1.0 / 1002.0)
    t2 = TallyResult(pairs_generated=1, detected=1, post_selected=2000,
                     counts_port1=1000, counts_port2=1000, qber_estimate=0.5,
                     qber_sigma=0.0, seed=0)
    q2, sigma2 = estimate_qber(t2)
    assert q2 == 0.5
    assert sigma2 == pytest.approx(math.sqrt(0.25 / 2000.0))
    empty = TallyResult(pairs_generated=1, detected=0, post_selected=0,
                        counts_port1=0, counts_port2=0,
                        qber_estimate=float("nan"), qber_sigma=float("nan"),
                        seed=0)
    with pytest.raises(InsufficientStatisticsError):
        estimate_qber(empty)


def test_sharded_run_merges_deterministically(smf):
    a = simulate(base_config(smf, shards=4, seed=77))
    b = simulate(base_config(smf, shards=4, seed=77))
    assert a == b


def test_shards_preserve_statistics(smf):
    """Two-sample test: sharded and unsharded runs draw from the same
    distribution of QBER estimates."""
    from scipy import stats
    q1, q4 = [], []
    for seed in range(40):
        t1 = simulate(base_config(smf, pairs_generated=2 * 10 ** 5,
                                  forced_phase_rad=0.3, seed=seed))
        t4 = simulate(base_config(smf, pairs_generated=2 * 10 ** 5,
                                  forced_phase_rad=0.3, seed=1000 + seed,
                                  shards=4))
        q1.append(t1.qber_estimate)
        q4.append(t4.qber_estimate)
    assert stats.ks_2samp(q1, q4).pvalue > 0.01


def test_per_channel_breakdown(smf, grid100):
    pairs = pair_channels(grid100, 770.0, (1541.0, 1579.0))
    cfg = base_config(smf, pairs_generated=2 * 10 ** 5,
                      channel_plan=tuple(pairs), grid=grid100)
    tally = simulate(cfg)
    assert tally.per_channel
    total_breakdown = sum(t.post_selected for t in tally.per_channel.values())
    assert total_breakdown <= tally.post_selected
    for t in tally.per_channel.values():
        assert t.counts_port1 + t.counts_port2 == t.post_selected
    # most events fall inside the plan's channels (passbands tile the band)
    assert total_breakdown > 0.8 * tally.post_selected


def test_channel_filter_restricts_sampling(smf, grid100):
    pairs = pair_channels(grid100, 770.0, (1541.0, 1579.0))
    # an edge channel fails the threshold in the balanced configuration,
    # so its filtered QBER should sit far above the degenerate channel's
    edge = max(pairs, key=lambda p: p.alice.center_wavelength_nm)
    near = min(pairs, key=lambda p: p.alice.center_wavelength_nm)
    t_edge = simulate(base_config(smf, pairs_generated=10 ** 5,
                                  channel_filter=edge, seed=5))
    t_near = simulate(base_config(smf, pairs_generated=10 ** 5,
                                  channel_filter=near, seed=5))
    assert t_edge.qber_estimate > 10 * max(t_near.qber_estimate, 1e-4)


def test_dark_counts_symmetric_and_phase_independent(smf):
    cfg = base_config(smf, detectors=(DetectorModel(0.0, 0.05),
                                      DetectorModel(0.0, 0.05)),
                      pairs_generated=10 ** 6, forced_phase_rad=0.0, seed=9)
    tally = simulate(cfg)
    assert tally.detected == 0
    assert tally.post_selected > 0
    sigma = math.sqrt(0.25 / tally.post_selected)
    assert abs(tally.qber_estimate - 0.5) < 4.0 * sigma


def test_chunking_is_invisible(smf, monkeypatch):
    import franson_dwdm.montecarlo as mc
    big = simulate(base_config(smf, pairs_generated=3 * 10 ** 4, seed=31))
    monkeypatch.setattr(mc, "_CHUNK", 7001)
    small = simulate(base_config(smf, pairs_generated=3 * 10 ** 4, seed=31))
    assert big == small


def test_invalid_configs_rejected(smf):
    with pytest.raises(ValueError):
        DetectorModel(1.2)
    with pytest.raises(ValueError):
        DetectorModel(0.5, -0.1)
    with pytest.raises(ValueError):
        base_config(smf, pairs_generated=0)
    with pytest.raises(ValueError):
        base_config(smf, shards=0)
