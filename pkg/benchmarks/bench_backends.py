#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Times the four hot kernels plus one end-to-end scan and one Monte Carlo
run on each available backend and prints a small table. Both backends
produce bit-identical output, so the comparison is purely about speed.
"""

import time

import numpy as np

import franson_dwdm as fd
from franson_dwdm import _backend

B = np.array([0.6961663, 0.4079426, 0.8974794])
C = np.array([0.0684043 ** 2, 0.1162414 ** 2, 9.896161 ** 2])


def timeit(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_cases():
    lam_um = np.random.default_rng(0).uniform(1.46, 1.62, 1_000_000)
    lam_nm = lam_um * 1000.0
    lam47 = np.linspace(1541.0, 1579.0, 47)
    a47, s47 = _backend.pair_phase_coeffs(lam47, 770.0, 0.067, B, C)
    group = np.arange(47, dtype=np.int64)
    deltas = np.arange(-50.0, 50.0, 0.1) * 1e-6
    u = np.random.default_rng(1).random((1_000_000, 4))
    p1 = np.full(1_000_000, 0.9951)
    chan = np.full(1_000_000, -1, dtype=np.int64)
    return [
        ("sellmeier_derivs (1e6 pts)",
         lambda: _backend.sellmeier_derivs(lam_um, B, C)),
        ("pair_raw_phase (1e6 pts)",
         lambda: _backend.pair_raw_phase(lam_nm, 770.0, 0.067, 0.0669, B, C)),
        ("scan_detuning (1001 x 47)",
         lambda: _backend.scan_detuning(a47, s47, group, 47, deltas, 0.14,
                                        True, 0.0, 23)),
        ("mc_cascade (1e6 events)",
         lambda: _backend.mc_cascade(u[:, 0], u[:, 1], u[:, 2], u[:, 3],
                                     0.2, 0.25, p1, chan, 0)),
    ]


def pipeline_cases():
    smf = fd.get_model("smf-effective")
    problem = fd.OptimizationProblem(source=fd.SourceSpec(),
                                     grid=fd.GridSpec(), fiber=smf,
                                     delta_search_m=(-50e-6, 50e-6, 0.1e-6))
    interf = fd.calibrated(fd.InterferometerPair(fiber=smf), 1540.0)
    exp = fd.ExperimentConfig(source=fd.SourceSpec(), interf=interf,
                              detectors=(fd.DetectorModel(0.2),
                                         fd.DetectorModel(0.25)),
                              pairs_generated=1_000_000, seed=0)
    return [
        ("scan_optimize (0.1 um step)", lambda: fd.scan_optimize(problem)),
        ("simulate (1e6 pairs)", lambda: fd.simulate(exp)),
    ]


def main():
    backends = fd.available_backends()
    print(f"available backends: {', '.join(backends)}")
    cases = kernel_cases() + pipeline_cases()
    results = {}
    for backend in backends:
        fd.set_backend(backend)
        for name, fn in cases:
            results[(name, backend)] = timeit(fn)
    width = max(len(name) for name, _ in cases)
    header = f"{'case':<{width}}  " + "".join(f"{b:>12}" for b in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, _ in cases:
        row = f"{name:<{width}}  "
        times = [results[(name, b)] for b in backends]
        row += "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(backends) > 1:
            ref = results[(name, "numpy")]
            fast = results[(name, "cython")]
            row += f"{ref / fast:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
