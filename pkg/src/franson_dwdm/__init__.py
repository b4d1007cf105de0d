"""Broadband energy-time entanglement analysis over DWDM channel grids.

Models the wavelength-dependent two-photon phase of a pair of unbalanced
analyzer interferometers, maps it to the quantum bit error rate, counts
ITU channel pairs satisfying a QBER threshold, and optimizes the analyzer
detuning that maximizes that count. A Monte Carlo module simulates
coincidence counting at the event level.
"""

from ._backend import active_backend, available_backends, set_backend
from .dispersion import (BUILTIN_MODELS, DEFAULT_MODEL_NAME, DispersionPoint,
                         SellmeierModel, dispersion_sample, get_model,
                         group_index, group_velocity, refractive_index)
from .grid import (Channel, ChannelPair, GridSpec, channels_in_band,
                   count_passing_pairs, pair_channels)
from .montecarlo import (DetectorModel, ExperimentConfig, TallyResult,
                         estimate_qber, simulate)
from .optimizer import (OptimizationProblem, OptimizationResult, PhaseFit,
                        centered_offset, closed_form_detuning,
                        fit_phase_model, optimize_offset, scan_optimize)
from .phase import (AnalysisBasis, InterferometerPair, arm_phase,
                    balanced_phase_approx, calibrated,
                    coincidence_probabilities, phase_from_qber,
                    qber_from_phase, second_basis, two_photon_phase,
                    wrap_phase)
from .source import (PhotonPair, SourceSpec, conjugate_wavelength,
                     emission_band, sample_pair, spectral_density)

__version__ = "0.1.0"

__all__ = [
    "AnalysisBasis", "BUILTIN_MODELS", "Channel", "ChannelPair",
    "DEFAULT_MODEL_NAME", "DetectorModel", "DispersionPoint",
    "ExperimentConfig", "GridSpec", "InterferometerPair",
    "OptimizationProblem", "OptimizationResult", "PhaseFit", "PhotonPair",
    "SellmeierModel", "SourceSpec", "TallyResult", "active_backend",
    "arm_phase", "available_backends", "balanced_phase_approx", "calibrated",
    "centered_offset", "channels_in_band", "closed_form_detuning",
    "coincidence_probabilities",
    "conjugate_wavelength", "count_passing_pairs", "dispersion_sample",
    "emission_band", "estimate_qber", "fit_phase_model", "get_model",
    "group_index", "group_velocity", "optimize_offset", "pair_channels",
    "phase_from_qber", "qber_from_phase", "refractive_index", "sample_pair",
    "scan_optimize", "second_basis", "set_backend", "simulate",
    "spectral_density", "two_photon_phase", "wrap_phase",
]
