"""Kernel backend selection.

The compiled Cython backend is preferred when its extension module built;
otherwise the NumPy fallback is used. Both produce bit-identical results
(see ``fallback.py``), so the choice only affects speed. The environment
variable ``FRANSON_DWDM_BACKEND`` (``cython`` or ``numpy``) overrides the
default, and :func:`set_backend` switches at runtime, which the benchmark
and the backend equivalence tests rely on.
"""

import os

from . import fallback as _numpy_impl

try:
    from . import _core as _cython_impl
except ImportError:
    _cython_impl = None

_IMPLS = {"numpy": _numpy_impl}
if _cython_impl is not None:
    _IMPLS["cython"] = _cython_impl


def _initial():
    name = os.environ.get("FRANSON_DWDM_BACKEND", "").strip().lower()
    if name in _IMPLS:
        return name
    return "cython" if "cython" in _IMPLS else "numpy"


_active_name = _initial()
_active = _IMPLS[_active_name]


def available_backends():
    return sorted(_IMPLS)


def active_backend():
    return _active_name


def set_backend(name):
    """Select the kernel implementation by name; returns the previous name."""
    global _active, _active_name
    if name not in _IMPLS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    previous = _active_name
    _active_name = name
    _active = _IMPLS[name]
    return previous


def sellmeier_n(lam_um, b, c):
    return _active.sellmeier_n(lam_um, b, c)


def sellmeier_derivs(lam_um, b, c):
    return _active.sellmeier_derivs(lam_um, b, c)


def pair_raw_phase(lam_a_nm, lam_p_nm, dl_a_m, dl_b_m, b, c):
    return _active.pair_raw_phase(lam_a_nm, lam_p_nm, dl_a_m, dl_b_m, b, c)


def pair_phase_coeffs(lam_a_nm, lam_p_nm, dl_b_m, b, c):
    return _active.pair_phase_coeffs(lam_a_nm, lam_p_nm, dl_b_m, b, c)


def scan_detuning(a, s, group_id, n_groups, deltas, threshold, auto_offset,
                  phi0_fixed, ref_index):
    return _active.scan_detuning(a, s, group_id, n_groups, deltas, threshold,
                                 auto_offset, phi0_fixed, ref_index)


def mc_cascade(u_det_a, u_det_b, u_post, u_port, eta_a, eta_b, p_port1,
               chan, n_chan):
    return _active.mc_cascade(u_det_a, u_det_b, u_post, u_port, eta_a, eta_b,
                              p_port1, chan, n_chan)
