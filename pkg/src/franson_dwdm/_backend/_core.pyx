# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels, bit-identical to the NumPy fallback.

Every function mirrors its twin in ``fallback.py`` operation for operation,
using only IEEE-exact primitives (+, -, *, /, sqrt, rint, comparisons).
The extension is compiled with -ffp-contract=off so no fused multiply-add
changes rounding relative to the NumPy evaluation.
"""

from libc.math cimport sqrt, rint, fabs

import numpy as np

cdef double TWO_PI = 2.0 * 3.141592653589793
cdef double PI = 3.141592653589793


cdef inline double _wrap(double phi) nogil:
    cdef double r = phi - TWO_PI * rint(phi / TWO_PI)
    if r <= -PI:
        r = r + TWO_PI
    elif r > PI:
        r = r - TWO_PI
    return r


cdef inline double _sell_n(double lam_um, const double[::1] b,
                           const double[::1] c) nogil:
    cdef double lam2 = lam_um * lam_um
    cdef double s = 0.0
    cdef double d
    cdef Py_ssize_t i
    for i in range(b.shape[0]):
        d = lam2 - c[i]
        s = s + b[i] * lam2 / d
    return sqrt(1.0 + s)


def sellmeier_n(lam_um, b, c):
    lam = np.ascontiguousarray(lam_um, dtype=np.float64).ravel()
    cdef double[::1] lv = lam
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    out = np.empty(lam.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t j
    for j in range(lv.shape[0]):
        ov[j] = _sell_n(lv[j], bv, cv)
    return out.reshape(np.shape(lam_um))


def sellmeier_derivs(lam_um, b, c):
    lam = np.ascontiguousarray(lam_um, dtype=np.float64).ravel()
    cdef double[::1] lv = lam
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    n_out = np.empty(lam.shape[0], dtype=np.float64)
    dn_out = np.empty(lam.shape[0], dtype=np.float64)
    d2n_out = np.empty(lam.shape[0], dtype=np.float64)
    cdef double[::1] nv = n_out, dnv = dn_out, d2nv = d2n_out
    cdef Py_ssize_t i, j
    cdef double lam_, lam2, s, s1, s2, d, u, stot, n, sp, spp
    for j in range(lv.shape[0]):
        lam_ = lv[j]
        lam2 = lam_ * lam_
        s = 0.0; s1 = 0.0; s2 = 0.0
        for i in range(bv.shape[0]):
            d = lam2 - cv[i]
            s = s + bv[i] * lam2 / d
            u = bv[i] * cv[i] / (d * d)
            s1 = s1 + u
            s2 = s2 + u / d
        stot = 1.0 + s
        n = sqrt(stot)
        sp = -2.0 * lam_ * s1
        spp = -2.0 * s1 + 8.0 * lam2 * s2
        nv[j] = n
        dnv[j] = sp / (2.0 * n)
        d2nv[j] = (2.0 * stot * spp - sp * sp) / (4.0 * stot * sqrt(stot))
    shape = np.shape(lam_um)
    return n_out.reshape(shape), dn_out.reshape(shape), d2n_out.reshape(shape)


def pair_raw_phase(lam_a_nm, double lam_p_nm, double dl_a_m, double dl_b_m,
                   b, c):
    lam = np.ascontiguousarray(lam_a_nm, dtype=np.float64).ravel()
    cdef double[::1] lv = lam
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    out = np.empty(lam.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t j
    cdef double la, lb, n_a, n_b, den_a, den_b
    for j in range(lv.shape[0]):
        la = lv[j]
        lb = 1.0 / (1.0 / lam_p_nm - 1.0 / la)
        n_a = _sell_n(la * 1e-3, bv, cv)
        n_b = _sell_n(lb * 1e-3, bv, cv)
        den_a = la * 1e-9
        den_b = lb * 1e-9
        ov[j] = TWO_PI * dl_a_m * n_a / den_a + TWO_PI * dl_b_m * n_b / den_b
    return out.reshape(np.shape(lam_a_nm))


def pair_phase_coeffs(lam_a_nm, double lam_p_nm, double dl_b_m, b, c):
    lam = np.ascontiguousarray(lam_a_nm, dtype=np.float64).ravel()
    cdef double[::1] lv = lam
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    a_out = np.empty(lam.shape[0], dtype=np.float64)
    s_out = np.empty(lam.shape[0], dtype=np.float64)
    cdef double[::1] av = a_out, sv = s_out
    cdef Py_ssize_t j
    cdef double la, lb, n_a, n_b, den_a, den_b, ta, tb
    for j in range(lv.shape[0]):
        la = lv[j]
        lb = 1.0 / (1.0 / lam_p_nm - 1.0 / la)
        n_a = _sell_n(la * 1e-3, bv, cv)
        n_b = _sell_n(lb * 1e-3, bv, cv)
        den_a = la * 1e-9
        den_b = lb * 1e-9
        ta = TWO_PI * n_a / den_a
        tb = TWO_PI * n_b / den_b
        av[j] = dl_b_m * (ta + tb)
        sv[j] = ta
    shape = np.shape(lam_a_nm)
    return a_out.reshape(shape), s_out.reshape(shape)


def scan_detuning(a, s, group_id, Py_ssize_t n_groups, deltas,
                  double threshold, bint auto_offset, double phi0_fixed,
                  Py_ssize_t ref_index):
    cdef double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[::1] sv = np.ascontiguousarray(s, dtype=np.float64)
    cdef long long[::1] gv = np.ascontiguousarray(group_id, dtype=np.int64)
    cdef double[::1] dv = np.ascontiguousarray(deltas, dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0], nd = dv.shape[0]
    counts = np.empty(nd, dtype=np.int64)
    phi0s = np.empty(nd, dtype=np.float64)
    cdef long long[::1] cv_ = counts
    cdef double[::1] pv = phi0s
    scratch = np.empty(n, dtype=np.float64)
    cdef double[::1] rv = scratch
    cdef Py_ssize_t i, j
    cdef double d, rel, rel_ref, rmax, rmin, cent, val
    cdef long long cnt, cur_group
    cdef bint group_ok
    for i in range(nd):
        d = dv[i]
        if auto_offset:
            rel_ref = av[ref_index] + d * sv[ref_index]
            rmax = -1e308
            rmin = 1e308
            for j in range(n):
                rel = av[j] + d * sv[j]
                val = _wrap(rel - rel_ref)
                rv[j] = val
                if val > rmax:
                    rmax = val
                if val < rmin:
                    rmin = val
            cent = -0.5 * (rmax + rmin)
            pv[i] = _wrap(cent - rel_ref)
            for j in range(n):
                rv[j] = _wrap(rv[j] + cent)
        else:
            for j in range(n):
                rel = av[j] + d * sv[j]
                rv[j] = _wrap(rel + phi0_fixed)
            pv[i] = phi0_fixed
        cnt = 0
        cur_group = -1
        group_ok = False
        for j in range(n):
            if gv[j] != cur_group:
                if cur_group != -1 and group_ok:
                    cnt = cnt + 1
                cur_group = gv[j]
                group_ok = True
            if fabs(rv[j]) > threshold:
                group_ok = False
        if cur_group != -1 and group_ok:
            cnt = cnt + 1
        cv_[i] = cnt
    return counts, phi0s


def mc_cascade(u_det_a, u_det_b, u_post, u_port, double eta_a, double eta_b,
               p_port1, chan, Py_ssize_t n_chan):
    # strided views: the uniforms arrive as column slices of one draw
    cdef double[:] ua = np.asarray(u_det_a, dtype=np.float64)
    cdef double[:] ub = np.asarray(u_det_b, dtype=np.float64)
    cdef double[:] up = np.asarray(u_post, dtype=np.float64)
    cdef double[:] uq = np.asarray(u_port, dtype=np.float64)
    cdef double[:] p1 = np.asarray(p_port1, dtype=np.float64)
    cdef long long[:] ch = np.asarray(chan, dtype=np.int64)
    per_post = np.zeros(n_chan, dtype=np.int64)
    per_p1 = np.zeros(n_chan, dtype=np.int64)
    cdef long long[::1] pp = per_post
    cdef long long[::1] pq = per_p1
    cdef Py_ssize_t i, n = ua.shape[0]
    cdef long long n_det = 0, n_post = 0, n_p1 = 0
    cdef long long det, post, port1
    if n_chan > 0:
        for i in range(n):
            det = (ua[i] < eta_a) & (ub[i] < eta_b)
            post = det & (up[i] < 0.5)
            port1 = post & (uq[i] < p1[i])
            n_det = n_det + det
            n_post = n_post + post
            n_p1 = n_p1 + port1
            if post and ch[i] >= 0:
                pp[ch[i]] = pp[ch[i]] + 1
                pq[ch[i]] = pq[ch[i]] + port1
    else:
        # branch-free accumulation keeps the event loop pipeline-friendly
        for i in range(n):
            det = (ua[i] < eta_a) & (ub[i] < eta_b)
            post = det & (up[i] < 0.5)
            port1 = post & (uq[i] < p1[i])
            n_det = n_det + det
            n_post = n_post + post
            n_p1 = n_p1 + port1
    return int(n_det), int(n_post), int(n_p1), per_post, per_p1
