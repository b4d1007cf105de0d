"""NumPy implementation of the hot kernels.

This module is the reference backend. The compiled Cython backend
(`_core.pyx`) implements the same functions with the same floating-point
operation order, restricted to IEEE-exact primitives (+, -, *, /, sqrt,
rint, comparisons), so both backends produce bit-identical output.
Transcendental functions (sin, cos, exp) are deliberately kept out of the
kernels and live in the shared driver code instead.
"""

import math

import numpy as np

TWO_PI = 2.0 * math.pi
PI = math.pi


def _wrap(phi):
    """Reduce phase to (-pi, pi]."""
    r = phi - TWO_PI * np.rint(phi / TWO_PI)
    r = np.where(r <= -PI, r + TWO_PI, r)
    r = np.where(r > PI, r - TWO_PI, r)
    return r


def sellmeier_n(lam_um, b, c):
    """Refractive index from the Sellmeier sum, lam in um."""
    lam_um = np.asarray(lam_um, dtype=np.float64)
    lam2 = lam_um * lam_um
    s = np.zeros_like(lam2)
    for bi, ci in zip(b, c):
        d = lam2 - ci
        s = s + bi * lam2 / d
    return np.sqrt(1.0 + s)


def sellmeier_derivs(lam_um, b, c):
    """Index plus first and second analytic derivatives (per um, per um^2)."""
    lam_um = np.asarray(lam_um, dtype=np.float64)
    lam2 = lam_um * lam_um
    s = np.zeros_like(lam2)
    s1 = np.zeros_like(lam2)
    s2 = np.zeros_like(lam2)
    for bi, ci in zip(b, c):
        d = lam2 - ci
        s = s + bi * lam2 / d
        u = bi * ci / (d * d)
        s1 = s1 + u
        s2 = s2 + u / d
    stot = 1.0 + s
    n = np.sqrt(stot)
    sp = -2.0 * lam_um * s1
    spp = -2.0 * s1 + 8.0 * lam2 * s2
    dn = sp / (2.0 * n)
    d2n = (2.0 * stot * spp - sp * sp) / (4.0 * stot * np.sqrt(stot))
    return n, dn, d2n


def pair_raw_phase(lam_a_nm, lam_p_nm, dl_a_m, dl_b_m, b, c):
    """Unreduced two-photon phase for conjugate pairs, lam_a in nm."""
    lam_a_nm = np.asarray(lam_a_nm, dtype=np.float64)
    lam_b_nm = 1.0 / (1.0 / lam_p_nm - 1.0 / lam_a_nm)
    n_a = sellmeier_n(lam_a_nm * 1e-3, b, c)
    n_b = sellmeier_n(lam_b_nm * 1e-3, b, c)
    den_a = lam_a_nm * 1e-9
    den_b = lam_b_nm * 1e-9
    term_a = TWO_PI * dl_a_m * n_a / den_a
    term_b = TWO_PI * dl_b_m * n_b / den_b
    return term_a + term_b


def pair_phase_coeffs(lam_a_nm, lam_p_nm, dl_b_m, b, c):
    """Coefficients (a, s) such that raw phase = a + detuning * s."""
    lam_a_nm = np.asarray(lam_a_nm, dtype=np.float64)
    lam_b_nm = 1.0 / (1.0 / lam_p_nm - 1.0 / lam_a_nm)
    n_a = sellmeier_n(lam_a_nm * 1e-3, b, c)
    n_b = sellmeier_n(lam_b_nm * 1e-3, b, c)
    den_a = lam_a_nm * 1e-9
    den_b = lam_b_nm * 1e-9
    ta = TWO_PI * n_a / den_a
    tb = TWO_PI * n_b / den_b
    a = dl_b_m * (ta + tb)
    return a, ta


def scan_detuning(a, s, group_id, n_groups, deltas, threshold,
                  auto_offset, phi0_fixed, ref_index):
    """Passing-group count and offset for every detuning in ``deltas``.

    a, s        linear phase coefficients per evaluation point (calibration
                reference already subtracted by the caller)
    group_id    non-decreasing channel index per evaluation point
    auto_offset when true, apply minmax centering relative to the point at
                ``ref_index``; otherwise add ``phi0_fixed``
    """
    a = np.asarray(a, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    group_id = np.asarray(group_id, dtype=np.int64)
    deltas = np.asarray(deltas, dtype=np.float64)
    counts = np.empty(deltas.shape[0], dtype=np.int64)
    phi0s = np.empty(deltas.shape[0], dtype=np.float64)
    starts = np.flatnonzero(np.r_[True, group_id[1:] != group_id[:-1]])
    for i, d in enumerate(deltas):
        rel = a + d * s
        if auto_offset:
            rel_ref = rel[ref_index]
            r = _wrap(rel - rel_ref)
            cent = -0.5 * (r.max() + r.min())
            val = _wrap(r + cent)
            phi0s[i] = _wrap(np.asarray(cent - rel_ref))
        else:
            val = _wrap(rel + phi0_fixed)
            phi0s[i] = phi0_fixed
        ok = np.abs(val) <= threshold
        counts[i] = int(np.minimum.reduceat(ok, starts).sum())
    return counts, phi0s


def mc_cascade(u_det_a, u_det_b, u_post, u_port, eta_a, eta_b, p_port1,
               chan, n_chan):
    """Bernoulli cascade over pre-drawn uniforms.

    Returns (n_detected, n_post, n_port1, per_chan_post, per_chan_port1).
    ``chan`` holds a channel slot per event (-1 when unassigned).
    """
    u_det_a = np.asarray(u_det_a)
    detected = (u_det_a < eta_a) & (np.asarray(u_det_b) < eta_b)
    post = detected & (np.asarray(u_post) < 0.5)
    port1 = post & (np.asarray(u_port) < np.asarray(p_port1))
    n_det = int(detected.sum())
    n_post = int(post.sum())
    n_p1 = int(port1.sum())
    if n_chan > 0:
        chan = np.asarray(chan, dtype=np.int64)
        sel = post & (chan >= 0)
        per_post = np.bincount(chan[sel], minlength=n_chan).astype(np.int64)
        per_p1 = np.bincount(chan[port1 & (chan >= 0)],
                             minlength=n_chan).astype(np.int64)
    else:
        per_post = np.zeros(0, dtype=np.int64)
        per_p1 = np.zeros(0, dtype=np.int64)
    return n_det, n_post, n_p1, per_post, per_p1
