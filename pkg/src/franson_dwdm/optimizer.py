"""Detuning and offset optimization for maximum passing channel pairs.

Two routes to the analyzer detuning: the closed-form group-delay matching
condition DL_A / v_A = DL_B / v_B evaluated at the band centers, and an
exhaustive deterministic scan over a detuning range that directly maximizes
the passing-pair count. A least-squares fit of measured phase-vs-wavelength
data to the quadratic balanced-phase model is provided for analysis of
experimental curves.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .dispersion import group_index
from .errors import FitError
from .grid import count_passing_pairs, evaluation_wavelengths, pair_channels
from .phase import InterferometerPair, qber_from_phase, two_photon_phase, wrap_phase
from .source import conjugate_wavelength, emission_band


@dataclass(frozen=True)
class OptimizationProblem:
    """Inputs of a detuning scan; lengths in m, phases in rad."""

    source: object
    grid: object
    fiber: object
    path_diff_b_m: float = 0.067
    threshold_phase_rad: float = 0.14
    delta_search_m: tuple = (-50e-6, 50e-6, 0.5e-6)
    phi0_mode: object = "auto"   # "auto" or a fixed offset in rad
    edge_rule: str = "center"
    calibration_wavelength_nm: float = None

    def __post_init__(self):
        lo, hi, step = self.delta_search_m
        if step <= 0:
            raise ValueError("delta_search step must be positive")
        if hi < lo:
            raise ValueError("delta_search range is empty")
        if self.threshold_phase_rad < 0:
            raise ValueError("threshold_phase_rad must be non-negative")
        if self.phi0_mode != "auto" and not isinstance(self.phi0_mode, (int, float)):
            raise ValueError("phi0_mode must be 'auto' or a number (rad)")


@dataclass(frozen=True)
class OptimizationResult:
    best_delta_m: float
    best_phi0_rad: float
    pair_count: int
    passing_band_nm: tuple     # (lam_lo, lam_hi) of passing Alice channels
    profile: tuple             # (lam_a, lam_b, phi, qber, passes) per pair
    method: str


@dataclass(frozen=True)
class PhaseFit:
    """Fit of phi(lam_a) = k (lam_a - lam_v)^2 / (lam_a - lam_p) + c.

    curvature k is in rad/nm with all wavelengths in nm (equivalently
    d2n/dlam2 * pi * DL in those units), vertex lam_v in nm, offset c in rad.
    """

    curvature_rad_nm: float
    vertex_wavelength_nm: float
    offset_rad: float
    residual_rms_rad: float


def closed_form_detuning(fiber, lam_a_star_nm, lam_b_star_nm, path_diff_b_m):
    """Detuning that matches the arm travel-time differences at the two
    band-center wavelengths: delta = DL_B (n_g(B)/n_g(A) - 1)."""
    ng_a = group_index(fiber, lam_a_star_nm)
    ng_b = group_index(fiber, lam_b_star_nm)
    return path_diff_b_m * (ng_b / ng_a - 1.0)


def optimize_offset(profile, threshold=None):
    """Minmax-centering offset -(max + min)/2 for a phase profile.

    Minimizes the worst-case |phi + phi0| over the given profile values;
    the optional threshold is accepted for interface symmetry but does not
    influence the centering.
    """
    prof = np.asarray(profile, dtype=np.float64)
    if prof.size == 0:
        raise ValueError("profile must be non-empty")
    return -0.5 * (prof.max() + prof.min())


def centered_offset(profile):
    """optimize_offset made insensitive to whole fringes.

    A reduced profile can straddle the (-pi, pi] cut even when its spread
    is small; aligning to the middle sample before centering removes that
    dependence on the absolute fringe position. Returns the offset in
    (-pi, pi].
    """
    prof = np.asarray(profile, dtype=np.float64)
    if prof.size == 0:
        raise ValueError("profile must be non-empty")
    ref = prof[prof.size // 2]
    rel = wrap_phase(prof - ref)
    return float(wrap_phase(optimize_offset(rel) - ref))


def band_center_wavelengths(pairs):
    """Channel-count-weighted Alice/Bob band centers of a pair list."""
    lam_a = np.array([p.alice.center_wavelength_nm for p in pairs])
    lam_b = np.array([p.bob.center_wavelength_nm for p in pairs])
    return float(lam_a.mean()), float(lam_b.mean())


def closed_form_for_problem(problem):
    """Closed-form detuning evaluated at the problem's band centers."""
    lam_p = problem.source.pump_wavelength_nm
    pairs = pair_channels(problem.grid, lam_p, emission_band(problem.source))
    if not pairs:
        raise ValueError("no channels inside the source band")
    lam_a_star, lam_b_star = band_center_wavelengths(pairs)
    return closed_form_detuning(problem.fiber, lam_a_star, lam_b_star,
                                problem.path_diff_b_m)


def _scan_deltas(search):
    lo, hi, step = search
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


def scan_optimize(problem):
    """Exhaustive detuning scan maximizing the passing-pair count.

    For each detuning the offset follows phi0_mode ('auto' applies minmax
    centering over the evaluated profile, wrapped relative to the middle
    evaluation point so the corridor logic is insensitive to whole fringes).
    Ties are broken toward smaller |delta|, then toward smaller delta, so
    the scan is fully deterministic. The reported count and profile are
    re-evaluated through count_passing_pairs at the chosen point.
    """
    lam_p = problem.source.pump_wavelength_nm
    pairs = pair_channels(problem.grid, lam_p, emission_band(problem.source))
    if not pairs:
        raise ValueError("no channels inside the source band")
    lam_eval = []
    group = []
    for i, pair in enumerate(pairs):
        for lam in evaluation_wavelengths(pair, problem.edge_rule):
            lam_eval.append(lam)
            group.append(i)
    lam_eval = np.asarray(lam_eval)
    group = np.asarray(group, dtype=np.int64)
    fiber = problem.fiber
    fiber.check_wavelength(lam_eval)
    fiber.check_wavelength(conjugate_wavelength(lam_p, lam_eval))
    a, s = _backend.pair_phase_coeffs(lam_eval, lam_p, problem.path_diff_b_m,
                                      fiber.strengths, fiber.resonances_um2)
    if problem.calibration_wavelength_nm is not None:
        lam_cal = float(problem.calibration_wavelength_nm)
        a_cal, s_cal = _backend.pair_phase_coeffs(
            np.array([lam_cal]), lam_p, problem.path_diff_b_m,
            fiber.strengths, fiber.resonances_um2)
        a = a - a_cal[0]
        s = s - s_cal[0]
    deltas = _scan_deltas(problem.delta_search_m)
    auto = problem.phi0_mode == "auto"
    phi0_fixed = 0.0 if auto else float(problem.phi0_mode)
    counts, phi0s = _backend.scan_detuning(
        a, s, group, len(pairs), deltas, problem.threshold_phase_rad,
        auto, phi0_fixed, lam_eval.shape[0] // 2)
    order = sorted(range(len(deltas)),
                   key=lambda i: (-counts[i], abs(deltas[i]), deltas[i]))
    best = order[0]
    best_delta = float(deltas[best])
    best_phi0 = float(wrap_phase(phi0s[best]))
    interf = InterferometerPair(
        fiber=fiber, path_diff_b_m=problem.path_diff_b_m,
        detuning_m=best_delta, phase_offset_rad=best_phi0,
        calibration_wavelength_nm=problem.calibration_wavelength_nm)
    pair_count, annotated = count_passing_pairs(
        pairs, interf, problem.threshold_phase_rad, problem.edge_rule)
    profile = []
    for pair in annotated:
        lam_a = pair.alice.center_wavelength_nm
        phi = two_photon_phase(interf, lam_p, lam_a)
        profile.append((lam_a, conjugate_wavelength(lam_p, lam_a),
                        phi, qber_from_phase(phi), pair.passes))
    passing = [p.alice.center_wavelength_nm for p in annotated if p.passes]
    band = (min(passing), max(passing)) if passing else None
    return OptimizationResult(
        best_delta_m=best_delta, best_phi0_rad=best_phi0,
        pair_count=pair_count, passing_band_nm=band,
        profile=tuple(profile), method="scan")


def fit_phase_model(data, lam_p_nm):
    """Least-squares fit of phase data to the balanced-phase model.

    data is a sequence of (lam_a_nm, phi_rad). The model is linear in
    (k, beta, gamma) through phi = (k lam^2 + beta lam + gamma)/(lam - lam_p),
    solved exactly by linear least squares, after which the vertex and
    offset are recovered algebraically.
    """
    pts = np.asarray(data, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 3:
        raise FitError("need at least 3 data points")
    lam, phi = pts[:, 0], pts[:, 1]
    if np.unique(lam).size < 3:
        raise FitError("need at least 3 distinct wavelengths")
    den = lam - lam_p_nm
    basis = np.column_stack([lam ** 2 / den, lam / den, 1.0 / den])
    coef, _, rank, _ = np.linalg.lstsq(basis, phi, rcond=None)
    if rank < 3:
        raise FitError("degenerate design: data are collinear in the model basis")
    k, beta, gamma = coef
    scale = max(abs(phi).max(), 1e-30)
    if abs(k) * (lam.max() - lam.min()) ** 2 / den.mean() < 1e-9 * scale:
        # effectively curvature-free data: constant model
        offset = float(np.mean(phi))
        resid = phi - offset
        return PhaseFit(0.0, 2.0 * lam_p_nm, offset,
                        float(np.sqrt(np.mean(resid ** 2))))
    disc = lam_p_nm ** 2 + (gamma + beta * lam_p_nm) / k
    if disc < 0:
        raise FitError("vertex recovery failed (negative discriminant)")
    root = math.sqrt(disc)
    lam_mid = float(lam.mean())
    vertex = min((lam_p_nm + root, lam_p_nm - root),
                 key=lambda v: abs(v - lam_mid))
    offset = beta + 2.0 * k * vertex
    model = k * (lam - vertex) ** 2 / den + offset
    rms = float(np.sqrt(np.mean((phi - model) ** 2)))
    return PhaseFit(float(k), float(vertex), float(offset), rms)
