"""Run configuration: one declarative file, INI sections or JSON object.

Both encodings share the same schema; unknown sections or keys are
rejected with the offending name, and every model-level invariant is
checked while the file is parsed, before any computation starts.
"""

import configparser
import json
from dataclasses import dataclass
from pathlib import Path

from .dispersion import BUILTIN_MODELS, DEFAULT_MODEL_NAME, SellmeierModel
from .errors import ConfigError
from .grid import GridSpec
from .montecarlo import DetectorModel
from .optimizer import OptimizationProblem
from .phase import InterferometerPair
from .source import SourceSpec, emission_band

_SCHEMA = {
    "source": {"pump_wavelength_nm", "spectral_shape", "fwhm_bandwidth_nm",
               "usable_band_nm"},
    "fiber": {"model", "name", "b_coefficients", "c_coefficients_um2",
              "validity_nm"},
    "interferometers": {"path_diff_b_m", "detuning_um", "phase_offset_rad",
                        "calibration_wavelength_nm"},
    "grid": {"anchor_thz", "spacing_ghz", "passband_ghz", "edge_rule"},
    "analysis": {"threshold_phase_rad", "band_nm", "step_nm"},
    "optimize": {"delta_min_um", "delta_max_um", "delta_step_um",
                 "phase_offset", "threshold_phase_rad"},
    "simulation": {"pairs", "seed", "eta_A", "eta_B", "dark_count_prob",
                   "shards"},
    "output": {"format", "digits", "timestamp"},
}


@dataclass(frozen=True)
class AnalysisSettings:
    threshold_phase_rad: float = 0.14
    band_nm: tuple = None          # None -> the source's emission band
    step_nm: float = 0.1


@dataclass(frozen=True)
class OptimizeSettings:
    delta_min_um: float = -50.0
    delta_max_um: float = 50.0
    delta_step_um: float = 0.5
    phase_offset: object = "auto"
    threshold_phase_rad: float = None   # None -> analysis threshold


@dataclass(frozen=True)
class SimulationSettings:
    pairs: int = 1_000_000
    seed: int = 0
    eta_A: float = 0.20
    eta_B: float = 0.25
    dark_count_prob: float = 0.0
    shards: int = 1


@dataclass(frozen=True)
class OutputSettings:
    format: str = "csv"
    digits: int = 12
    timestamp: bool = True


def _parse_float(raw, key):
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"key {key!r}: expected a number, got {raw!r}") from None


def _parse_int(raw, key):
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"key {key!r}: expected an integer, got {raw!r}") from None


def _parse_bool(raw, key):
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in ("true", "yes", "on", "1"):
        return True
    if text in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"key {key!r}: expected a boolean, got {raw!r}")


def _parse_pair(raw, key):
    if isinstance(raw, (list, tuple)):
        vals = list(raw)
    else:
        vals = [v for v in str(raw).replace(",", " ").split() if v]
    if len(vals) != 2:
        raise ConfigError(f"key {key!r}: expected two numbers, got {raw!r}")
    return (_parse_float(vals[0], key), _parse_float(vals[1], key))


def _parse_list(raw, key):
    if isinstance(raw, (list, tuple)):
        vals = list(raw)
    else:
        vals = [v for v in str(raw).replace(",", " ").split() if v]
    return [_parse_float(v, key) for v in vals]


def _sections_from_file(path):
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    text = path.read_text()
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON config: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("JSON config must be an object of sections")
        for key, value in data.items():
            if not isinstance(value, dict):
                raise ConfigError(f"section {key!r} must be an object")
        return {str(k): dict(v) for k, v in data.items()}
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keys are case-sensitive (eta_A, eta_B)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"invalid config file: {exc}") from None
    return {name: dict(parser[name]) for name in parser.sections()}


def _check_schema(sections):
    for name, keys in sections.items():
        if name not in _SCHEMA:
            raise ConfigError(f"unknown config section {name!r}")
        for key in keys:
            if key not in _SCHEMA[name]:
                raise ConfigError(f"unknown key {key!r} in section [{name}]")


class RunConfig:
    """Validated run configuration with builders for the model objects."""

    def __init__(self, sections=None):
        sections = sections or {}
        _check_schema(sections)
        try:
            self._build(sections)
        except ConfigError:
            raise
        except (ValueError, KeyError) as exc:
            raise ConfigError(str(exc)) from None

    def _build(self, sections):
        src = sections.get("source", {})
        kwargs = {}
        if "pump_wavelength_nm" in src:
            kwargs["pump_wavelength_nm"] = _parse_float(
                src["pump_wavelength_nm"], "pump_wavelength_nm")
        if "spectral_shape" in src:
            kwargs["spectral_shape"] = str(src["spectral_shape"]).strip()
        if "fwhm_bandwidth_nm" in src:
            kwargs["fwhm_bandwidth_nm"] = _parse_float(
                src["fwhm_bandwidth_nm"], "fwhm_bandwidth_nm")
        if "usable_band_nm" in src:
            kwargs["usable_band_nm"] = _parse_pair(
                src["usable_band_nm"], "usable_band_nm")
        self.source = SourceSpec(**kwargs)

        fib = sections.get("fiber", {})
        if "b_coefficients" in fib or "c_coefficients_um2" in fib:
            b = _parse_list(fib.get("b_coefficients", ""), "b_coefficients")
            c = _parse_list(fib.get("c_coefficients_um2", ""),
                            "c_coefficients_um2")
            if len(b) != len(c):
                raise ConfigError("b_coefficients and c_coefficients_um2 "
                                  "must have the same length")
            validity = _parse_pair(fib.get("validity_nm", "1150 1700"),
                                   "validity_nm")
            self.fiber = SellmeierModel(
                name=str(fib.get("name", "custom")),
                terms=tuple(zip(b, c)), validity_range=validity)
        else:
            name = str(fib.get("model", DEFAULT_MODEL_NAME)).strip()
            if name not in BUILTIN_MODELS:
                raise ConfigError(
                    f"key 'model': unknown fiber model {name!r}; "
                    f"built-ins: {sorted(BUILTIN_MODELS)}")
            self.fiber = BUILTIN_MODELS[name]

        itf = sections.get("interferometers", {})
        self.path_diff_b_m = _parse_float(itf.get("path_diff_b_m", 0.067),
                                          "path_diff_b_m")
        self.detuning_m = _parse_float(itf.get("detuning_um", 0.0),
                                       "detuning_um") * 1e-6
        raw_phi0 = itf.get("phase_offset_rad", 0.0)
        if str(raw_phi0).strip().lower() == "auto":
            self.phi0_auto = True
            self.phase_offset_rad = 0.0
        else:
            self.phi0_auto = False
            self.phase_offset_rad = _parse_float(raw_phi0, "phase_offset_rad")
        raw_cal = itf.get("calibration_wavelength_nm", None)
        if raw_cal is None or str(raw_cal).strip().lower() in ("none", ""):
            self.calibration_wavelength_nm = None
        else:
            self.calibration_wavelength_nm = _parse_float(
                raw_cal, "calibration_wavelength_nm")

        grd = sections.get("grid", {})
        self.grid = GridSpec(
            anchor_thz=_parse_float(grd.get("anchor_thz", 193.1), "anchor_thz"),
            spacing_ghz=_parse_float(grd.get("spacing_ghz", 100.0), "spacing_ghz"),
            passband_ghz=(_parse_float(grd["passband_ghz"], "passband_ghz")
                          if "passband_ghz" in grd else None))
        self.edge_rule = str(grd.get("edge_rule", "center")).strip()
        if self.edge_rule not in ("center", "edges"):
            raise ConfigError(f"key 'edge_rule': expected 'center' or "
                              f"'edges', got {self.edge_rule!r}")

        ana = sections.get("analysis", {})
        band = None
        if "band_nm" in ana and str(ana["band_nm"]).strip().lower() != "source":
            band = _parse_pair(ana["band_nm"], "band_nm")
        self.analysis = AnalysisSettings(
            threshold_phase_rad=_parse_float(
                ana.get("threshold_phase_rad", 0.14), "threshold_phase_rad"),
            band_nm=band,
            step_nm=_parse_float(ana.get("step_nm", 0.1), "step_nm"))
        if self.analysis.threshold_phase_rad < 0:
            raise ConfigError("key 'threshold_phase_rad': must be >= 0")
        if self.analysis.step_nm <= 0:
            raise ConfigError("key 'step_nm': must be > 0")

        opt = sections.get("optimize", {})
        raw_opt_phi0 = opt.get("phase_offset", "auto")
        if str(raw_opt_phi0).strip().lower() == "auto":
            opt_phi0 = "auto"
        else:
            opt_phi0 = _parse_float(raw_opt_phi0, "phase_offset")
        self.optimize = OptimizeSettings(
            delta_min_um=_parse_float(opt.get("delta_min_um", -50.0),
                                      "delta_min_um"),
            delta_max_um=_parse_float(opt.get("delta_max_um", 50.0),
                                      "delta_max_um"),
            delta_step_um=_parse_float(opt.get("delta_step_um", 0.5),
                                       "delta_step_um"),
            phase_offset=opt_phi0,
            threshold_phase_rad=(_parse_float(opt["threshold_phase_rad"],
                                              "threshold_phase_rad")
                                 if "threshold_phase_rad" in opt
                                 else self.analysis.threshold_phase_rad))

        sim = sections.get("simulation", {})
        self.simulation = SimulationSettings(
            pairs=_parse_int(sim.get("pairs", 1_000_000), "pairs"),
            seed=_parse_int(sim.get("seed", 0), "seed"),
            eta_A=_parse_float(sim.get("eta_A", 0.20), "eta_A"),
            eta_B=_parse_float(sim.get("eta_B", 0.25), "eta_B"),
            dark_count_prob=_parse_float(sim.get("dark_count_prob", 0.0),
                                         "dark_count_prob"),
            shards=_parse_int(sim.get("shards", 1), "shards"))
        # validate detector fields eagerly
        DetectorModel(self.simulation.eta_A, self.simulation.dark_count_prob)
        DetectorModel(self.simulation.eta_B, self.simulation.dark_count_prob)
        if self.simulation.pairs <= 0:
            raise ConfigError("key 'pairs': must be positive")
        if self.simulation.shards < 1:
            raise ConfigError("key 'shards': must be >= 1")

        out = sections.get("output", {})
        self.output = OutputSettings(
            format=str(out.get("format", "csv")).strip().lower(),
            digits=_parse_int(out.get("digits", 12), "digits"),
            timestamp=_parse_bool(out.get("timestamp", True), "timestamp"))
        if self.output.format not in ("csv", "json"):
            raise ConfigError(f"key 'format': expected 'csv' or 'json', "
                              f"got {self.output.format!r}")
        if self.output.digits < 9:
            raise ConfigError("key 'digits': at least 9 significant digits "
                              "are required")

        # interferometer invariants checked now, not at first use
        self.interferometer()

    @classmethod
    def from_file(cls, path):
        return cls(_sections_from_file(path))

    def interferometer(self, phase_offset_rad=None, detuning_m=None):
        return InterferometerPair(
            fiber=self.fiber,
            path_diff_b_m=self.path_diff_b_m,
            detuning_m=self.detuning_m if detuning_m is None else detuning_m,
            phase_offset_rad=(self.phase_offset_rad if phase_offset_rad is None
                              else phase_offset_rad),
            calibration_wavelength_nm=self.calibration_wavelength_nm)

    def analysis_band(self):
        if self.analysis.band_nm is not None:
            return self.analysis.band_nm
        return emission_band(self.source)

    def optimization_problem(self):
        o = self.optimize
        return OptimizationProblem(
            source=self.source, grid=self.grid, fiber=self.fiber,
            path_diff_b_m=self.path_diff_b_m,
            threshold_phase_rad=o.threshold_phase_rad,
            delta_search_m=(o.delta_min_um * 1e-6, o.delta_max_um * 1e-6,
                            o.delta_step_um * 1e-6),
            phi0_mode=o.phase_offset, edge_rule=self.edge_rule,
            calibration_wavelength_nm=self.calibration_wavelength_nm)
