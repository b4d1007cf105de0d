"""Command-line front end.

Subcommands: sweep, plan, optimize, simulate, dispersion. Each loads the
same declarative config file (INI sections or JSON object), runs one
analysis and emits a CSV or JSON table plus an optional SVG plot. All
output is deterministic for a given config and seed; an optional timestamp
comment is the only non-reproducible line and can be suppressed.

Exit codes: 0 success, 2 configuration error, 3 numerical/domain error.
"""

import argparse
import datetime
import json
import sys

import numpy as np

from .config import RunConfig
from .dispersion import index_derivatives
from .constants import SPEED_OF_LIGHT_M_S, C_NM_GHZ
from .errors import (ConfigError, FitError, InsufficientStatisticsError,
                     ValidityRangeError)
from .grid import count_passing_pairs, nearest_channel_index, channel_at, pair_channels
from .montecarlo import DetectorModel, ExperimentConfig, simulate
from .optimizer import centered_offset, closed_form_for_problem, scan_optimize
from .phase import qber_from_phase, two_photon_phase
from .source import conjugate_wavelength, emission_band
from . import svgplot


def _fmt_value(v, digits):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.{digits}g}"
    if v is None:
        return ""
    return str(v)


def _write_table(out_path, columns, rows, fmt, digits, timestamp, meta=None):
    """Emit rows as CSV or JSON to a file or stdout."""
    if fmt == "csv":
        lines = []
        if timestamp:
            lines.append("# generated: "
                         + datetime.datetime.now(datetime.timezone.utc)
                         .isoformat(timespec="seconds"))
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt_value(v, digits) for v in row))
        text = "\n".join(lines) + "\n"
    else:
        payload = {}
        if timestamp:
            payload["meta"] = {
                "generated": datetime.datetime.now(datetime.timezone.utc)
                .isoformat(timespec="seconds")}
        if meta:
            payload.update(meta)
        payload["columns"] = list(columns)
        payload["rows"] = [[v for v in row] for row in rows]
        text = json.dumps(payload, indent=1) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_offset(cfg, detuning_m=None):
    """Interferometer with the configured or auto-centered offset."""
    interf = cfg.interferometer(detuning_m=detuning_m)
    if not cfg.phi0_auto:
        return interf
    lam_p = cfg.source.pump_wavelength_nm
    pairs = pair_channels(cfg.grid, lam_p, emission_band(cfg.source))
    if not pairs:
        raise ValueError("no channels inside the source band")
    centers = np.array([p.alice.center_wavelength_nm for p in pairs])
    profile = two_photon_phase(interf, lam_p, centers)
    phi0 = centered_offset(profile)
    return cfg.interferometer(phase_offset_rad=phi0, detuning_m=detuning_m)


def _containing_channel(grid, lam_nm):
    nu = C_NM_GHZ / lam_nm
    k = nearest_channel_index(grid, nu)
    ch = channel_at(grid, k)
    if abs(nu - ch.center_frequency_ghz) <= grid.passband_ghz / 2.0:
        return ch
    return None


def _cmd_sweep(cfg, args):
    lam_p = cfg.source.pump_wavelength_nm
    lo, hi = cfg.analysis_band()
    step = cfg.analysis.step_nm
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    lam = lo + step * np.arange(n)
    interf = _resolve_offset(cfg)
    phi = two_photon_phase(interf, lam_p, lam)
    qber = qber_from_phase(phi)
    thr = cfg.analysis.threshold_phase_rad
    rows = []
    for la, ph, qb in zip(lam, phi, qber):
        lb = conjugate_wavelength(lam_p, float(la))
        ch_a = _containing_channel(cfg.grid, float(la))
        ch_b = _containing_channel(cfg.grid, lb)
        rows.append([float(la), lb, float(ph), float(qb),
                     ch_a.index if ch_a else None,
                     ch_b.index if ch_b else None,
                     bool(abs(ph) <= thr)])
    columns = ["lambda_A_nm", "lambda_B_nm", "phi_rad", "qber",
               "channel_index_A", "channel_index_B", "pass"]
    _write_table(args.out, columns, rows, args.format, cfg.output.digits,
                 args.timestamp)
    if args.svg:
        svgplot.line_plot(args.svg, lam, phi,
                          xlabel="Alice wavelength (nm)",
                          ylabel="two-photon phase (rad)",
                          title="two-photon phase over the source band",
                          corridor=(-thr, thr))
    return 0


def _cmd_plan(cfg, args):
    lam_p = cfg.source.pump_wavelength_nm
    pairs = pair_channels(cfg.grid, lam_p, cfg.analysis_band())
    interf = _resolve_offset(cfg)
    thr = cfg.analysis.threshold_phase_rad
    count, annotated = count_passing_pairs(pairs, interf, thr, cfg.edge_rule)
    rows = []
    for p in annotated:
        rows.append([p.alice.index, p.bob.index,
                     p.alice.center_wavelength_nm, p.bob.center_wavelength_nm,
                     p.frequency_sum_error_ghz, p.misaligned,
                     p.worst_phase_rad, p.worst_qber, p.passes])
    columns = ["index_A", "index_B", "lambda_A_nm", "lambda_B_nm",
               "frequency_sum_error_GHz", "misaligned", "worst_phase_rad",
               "worst_qber", "passes"]
    _write_table(args.out, columns, rows, args.format, cfg.output.digits,
                 args.timestamp, meta={"passing_pairs": count})
    print(f"passing_pairs={count}")
    if args.svg:
        lam = [p.alice.center_wavelength_nm for p in annotated]
        worst = [p.worst_phase_rad for p in annotated]
        svgplot.line_plot(args.svg, lam, worst,
                          xlabel="Alice channel wavelength (nm)",
                          ylabel="worst |phase| (rad)",
                          title="worst-case phase per channel pair",
                          corridor=(0.0, thr), markers=True)
    return 0


def _cmd_optimize(cfg, args):
    problem = cfg.optimization_problem()
    result = scan_optimize(problem)
    closed = closed_form_for_problem(problem)
    digits = cfg.output.digits
    payload = {
        "best_delta_um": result.best_delta_m * 1e6,
        "best_phi0_rad": result.best_phi0_rad,
        "pair_count": result.pair_count,
        "passing_band_nm": list(result.passing_band_nm)
        if result.passing_band_nm else None,
        "closed_form_delta_um": closed * 1e6,
        "method": result.method,
        "profile_columns": ["lambda_A_nm", "lambda_B_nm", "phi_rad", "qber",
                            "passes"],
        "profile": [list(row) for row in result.profile],
    }
    if args.timestamp:
        payload["meta"] = {
            "generated": datetime.datetime.now(datetime.timezone.utc)
            .isoformat(timespec="seconds")}
    text = json.dumps(payload, indent=1) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"pair_count={result.pair_count} "
          f"best_delta_um={result.best_delta_m * 1e6:.{digits}g} "
          f"closed_form_delta_um={closed * 1e6:.{digits}g}")
    return 0


def _cmd_simulate(cfg, args):
    lam_p = cfg.source.pump_wavelength_nm
    pairs = pair_channels(cfg.grid, lam_p, cfg.analysis_band())
    interf = _resolve_offset(cfg)
    sim = cfg.simulation
    seed = args.seed if args.seed is not None else sim.seed
    exp = ExperimentConfig(
        source=cfg.source, interf=interf,
        detectors=(DetectorModel(sim.eta_A, sim.dark_count_prob),
                   DetectorModel(sim.eta_B, sim.dark_count_prob)),
        pairs_generated=sim.pairs, seed=seed, shards=sim.shards,
        channel_plan=tuple(pairs), grid=cfg.grid)
    tally = simulate(exp)
    rows = []
    for p in pairs:
        t = tally.per_channel.get(p.alice.index)
        rows.append([p.alice.index, p.bob.index,
                     p.alice.center_wavelength_nm, p.bob.center_wavelength_nm,
                     t.post_selected if t else 0,
                     t.counts_port1 if t else 0,
                     t.counts_port2 if t else 0,
                     t.qber if t else None, t.sigma if t else None])
    columns = ["index_A", "index_B", "lambda_A_nm", "lambda_B_nm",
               "post_selected", "counts_port1", "counts_port2", "qber",
               "qber_sigma"]
    meta = {"pairs_generated": tally.pairs_generated,
            "detected": tally.detected,
            "post_selected": tally.post_selected,
            "qber_estimate": tally.qber_estimate,
            "qber_sigma": tally.qber_sigma,
            "seed": seed}
    _write_table(args.out, columns, rows, args.format, cfg.output.digits,
                 args.timestamp, meta=meta)
    return 0


def _cmd_dispersion(cfg, args):
    lo, hi = cfg.analysis_band()
    step = cfg.analysis.step_nm
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    lam = lo + step * np.arange(n)
    nv, dn, d2n = index_derivatives(cfg.fiber, lam)
    lam_um = lam * 1e-3
    ng = nv - lam_um * dn
    vg = SPEED_OF_LIGHT_M_S / ng
    rows = [[float(a), float(b), float(c), float(d), float(e), float(f)]
            for a, b, c, d, e, f in zip(lam, nv, dn, d2n, ng, vg)]
    columns = ["lambda_nm", "n", "dn_dlambda_per_um", "d2n_dlambda2_per_um2",
               "group_index", "group_velocity_m_s"]
    _write_table(args.out, columns, rows, args.format, cfg.output.digits,
                 args.timestamp)
    return 0


_COMMANDS = {
    "sweep": _cmd_sweep,
    "plan": _cmd_plan,
    "optimize": _cmd_optimize,
    "simulate": _cmd_simulate,
    "dispersion": _cmd_dispersion,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="franson-dwdm",
        description="Broadband energy-time entanglement analysis planning "
                    "over DWDM channel grids")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
            ("sweep", "two-photon phase and QBER over the source band"),
            ("plan", "channel-pair table with pass/fail against the threshold"),
            ("optimize", "detuning scan maximizing the passing-pair count"),
            ("simulate", "Monte Carlo coincidence tallies per channel pair"),
            ("dispersion", "fiber index and derivatives over a band")]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="config file (INI or JSON)")
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="output encoding (default from [output] section)")
        p.add_argument("--no-header-timestamp", dest="no_timestamp",
                       action="store_true",
                       help="suppress the timestamp header line")
        p.add_argument("--seed", type=int, default=None,
                       help="override the simulation seed")
        if name in ("sweep", "plan"):
            p.add_argument("--svg", default=None, help="write an SVG plot here")
        else:
            p.set_defaults(svg=None)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_file(args.config)
        args.format = args.format or cfg.output.format
        args.timestamp = cfg.output.timestamp and not args.no_timestamp
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValidityRangeError, InsufficientStatisticsError, FitError,
            ValueError, ZeroDivisionError, FloatingPointError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
