"""Scenario configuration: a TOML file with sections mirroring the scenario
(materials, fiber, pump, signal, shutter, source, scan, output).

Rules:
- every value key carries its unit in the name (_nm, _fs, _nj, _m, _ps, ...);
  internal computation is SI;
- unknown keys anywhere are hard errors, never silently ignored;
- parse -> serialize -> parse round-trips to an identical document.

When `shutter.calibration` is omitted the scalar is fixed so that the
nonlinear phase reaches pi at `calibration_energy_nj` and zero delay.  When
`source.mean_pairs` is omitted the pair rate is root-found so the
ideal-detection heralded g2 equals `source.g2_target`.
"""

from __future__ import annotations

import json
import math

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .materials import FUSED_SILICA, SellmeierCoefficients
from .montecarlo import NOISE_STATISTICS, PAIR_STATISTICS, SourceModel
from .pulses import PULSE_SHAPES, Pulse
from .shutter import FiberSpec, ShutterConfig, SignalProfile, calibrate
from .expectations import calibrate_mean_pairs

_NUMBER = (int, float)

_MATERIAL_KEYS = {"b": list, "c_um2": list, "valid_range_um": list}

_SECTION_KEYS = {
    "fiber": {
        "length_m": _NUMBER,
        "n2_m2_per_w": _NUMBER,
        "effective_area_m2": _NUMBER,
        "material": str,
    },
    "pump": {
        "wavelength_nm": _NUMBER,
        "fwhm_fs": _NUMBER,
        "energy_nj": _NUMBER,
        "shape": str,
        "polarization_deg": _NUMBER,
    },
    "signal": {
        "wavelength_nm": _NUMBER,
        "profile": str,
        "profile_fwhm_fs": _NUMBER,
        "profile_rect_fs": _NUMBER,
    },
    "shutter": {
        "theta_deg": _NUMBER,
        "calibration": _NUMBER,
        "calibration_energy_nj": _NUMBER,
        "imperfection": _NUMBER,
        "walkoff_ps_per_m": _NUMBER,
    },
    "source": {
        "mean_pairs": _NUMBER,
        "g2_target": _NUMBER,
        "pair_statistics": str,
        "idler_efficiency": _NUMBER,
        "signal_transmission_base": _NUMBER,
        "noise_photons_per_pulse_at_ref": _NUMBER,
        "noise_reference_energy_nj": _NUMBER,
        "noise_exponent": _NUMBER,
        "noise_table_nj": list,
        "noise_statistics": str,
        "noise_modes": int,
        "dark_count_prob": _NUMBER,
        "analyzer_extinction": _NUMBER,
    },
    "scan": {
        "type": str,
        "tau_min_ps": _NUMBER,
        "tau_max_ps": _NUMBER,
        "energy_min_nj": _NUMBER,
        "energy_max_nj": _NUMBER,
        "steps": int,
        "n_pulses": int,
        "seed": int,
        "rel_tol": _NUMBER,
    },
    "output": {
        "directory": str,
        "formats": list,
    },
}

_SCAN_KEYS_BY_TYPE = {
    "delay": {"type", "tau_min_ps", "tau_max_ps", "steps", "rel_tol"},
    "energy": {"type", "energy_min_nj", "energy_max_nj", "steps", "rel_tol"},
    "g2": {"type", "energy_min_nj", "energy_max_nj", "steps", "n_pulses", "seed", "rel_tol"},
}

_REQUIRED_SECTIONS = ("fiber", "pump", "signal", "shutter", "source", "scan", "output")


@dataclass
class NoiseSpec:
    """Noise photons per pump pulse at the switched port, as a function of energy.

    Either a power law nu(E) = ref_value (E / ref_energy)^exponent, or a
    tabulated curve (linearly interpolated, clamped at the table ends).
    """

    ref_value: float = 0.0
    ref_energy_j: float = 3.0e-9
    exponent: float = 3.0
    table: list | None = None  # [(energy_j, nu), ...] sorted by energy

    def at(self, energy_j: float) -> float:
        if self.table is not None:
            energies = [row[0] for row in self.table]
            values = [row[1] for row in self.table]
            return float(np.interp(energy_j, energies, values))
        if self.ref_value == 0.0 or energy_j <= 0.0:
            return 0.0
        return self.ref_value * (energy_j / self.ref_energy_j) ** self.exponent


@dataclass
class ScanSpec:
    type: str
    grid: np.ndarray  # seconds for delay scans, joules for energy/g2 scans
    rel_tol: float = 1e-6
    n_pulses: int | None = None
    seed: int | None = None


@dataclass
class Scenario:
    """Validated, resolved scenario ready to run."""

    raw: dict
    materials: dict
    shutter: ShutterConfig
    imperfection: float
    source: SourceModel        # mean_pairs resolved; signal_transmission = base (no switch)
    g2_input_target: float
    noise: NoiseSpec
    scan: ScanSpec
    output_directory: str
    output_formats: list = field(default_factory=lambda: ["csv"])


def load_config(path) -> dict:
    """Parse a TOML scenario file into a raw dict (no validation)."""
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file is not valid TOML: {exc}") from exc


def _check_keys(section: str, table: dict, allowed: dict):
    unknown = sorted(set(table) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")
    for key, value in table.items():
        expected = allowed[key]
        if expected is list:
            if not isinstance(value, list):
                raise ConfigError(f"[{section}] {key} must be a list")
        elif expected is int:
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(f"[{section}] {key} must be an integer")
        elif expected is str:
            if not isinstance(value, str):
                raise ConfigError(f"[{section}] {key} must be a string")
        else:
            if not isinstance(value, _NUMBER) or isinstance(value, bool):
                raise ConfigError(f"[{section}] {key} must be a number")


def _require(section: str, table: dict, key: str):
    if key not in table:
        raise ConfigError(f"[{section}] is missing required key '{key}'")
    return table[key]


def _build_materials(raw: dict) -> dict:
    materials = {"fused_silica": FUSED_SILICA}
    for name, table in raw.get("materials", {}).items():
        if not isinstance(table, dict):
            raise ConfigError(f"[materials.{name}] must be a table")
        _check_keys(f"materials.{name}", table, _MATERIAL_KEYS)
        b = _require(f"materials.{name}", table, "b")
        c = _require(f"materials.{name}", table, "c_um2")
        rng = _require(f"materials.{name}", table, "valid_range_um")
        if len(b) != len(c):
            raise ConfigError(f"[materials.{name}] b and c_um2 must have the same length")
        if len(rng) != 2:
            raise ConfigError(f"[materials.{name}] valid_range_um must be [min, max]")
        try:
            materials[name] = SellmeierCoefficients(
                terms=tuple((float(bi), float(ci)) for bi, ci in zip(b, c)),
                valid_range_um=(float(rng[0]), float(rng[1])),
            )
        except ValueError as exc:
            raise ConfigError(f"[materials.{name}]: {exc}") from exc
    return materials


def _build_scan(table: dict) -> ScanSpec:
    scan_type = _require("scan", table, "type")
    if scan_type not in _SCAN_KEYS_BY_TYPE:
        raise ConfigError(f"[scan] type must be one of {sorted(_SCAN_KEYS_BY_TYPE)}, got {scan_type!r}")
    allowed = _SCAN_KEYS_BY_TYPE[scan_type]
    extra = sorted(set(table) - allowed)
    if extra:
        raise ConfigError(f"key(s) not valid for a {scan_type} scan in [scan]: {', '.join(extra)}")

    steps = _require("scan", table, "steps")
    if steps < 1:
        raise ConfigError("[scan] steps must be at least 1")
    rel_tol = float(table.get("rel_tol", 1e-6))
    if rel_tol <= 0:
        raise ConfigError("[scan] rel_tol must be positive")

    if scan_type == "delay":
        lo = float(_require("scan", table, "tau_min_ps")) * 1e-12
        hi = float(_require("scan", table, "tau_max_ps")) * 1e-12
    else:
        lo = float(_require("scan", table, "energy_min_nj")) * 1e-9
        hi = float(_require("scan", table, "energy_max_nj")) * 1e-9
        if lo < 0:
            raise ConfigError("[scan] energies must be non-negative")
    if steps > 1 and not hi > lo:
        raise ConfigError("[scan] grid maximum must exceed minimum")
    grid = np.linspace(lo, hi, steps)

    n_pulses = seed = None
    if scan_type == "g2":
        n_pulses = _require("scan", table, "n_pulses")
        if n_pulses < 1:
            raise ConfigError("[scan] n_pulses must be at least 1")
        seed = _require("scan", table, "seed")
        if seed < 0:
            raise ConfigError("[scan] seed must be non-negative")

    return ScanSpec(type=scan_type, grid=grid, rel_tol=rel_tol, n_pulses=n_pulses, seed=seed)


def build_scenario(raw: dict) -> Scenario:
    """Validate a raw config dict and resolve it into runnable objects."""
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a table")
    unknown = sorted(set(raw) - set(_SECTION_KEYS) - {"materials"})
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(unknown)}")
    for section in _REQUIRED_SECTIONS:
        if section not in raw:
            raise ConfigError(f"missing required section [{section}]")
        if not isinstance(raw[section], dict):
            raise ConfigError(f"[{section}] must be a table")
        _check_keys(section, raw[section], _SECTION_KEYS[section])

    materials = _build_materials(raw)

    fiber_tbl = raw["fiber"]
    material_name = _require("fiber", fiber_tbl, "material")
    if material_name not in materials:
        raise ConfigError(f"[fiber] references unknown material {material_name!r}")
    try:
        fiber = FiberSpec(
            length_m=float(_require("fiber", fiber_tbl, "length_m")),
            nonlinear_index_m2_per_w=float(_require("fiber", fiber_tbl, "n2_m2_per_w")),
            effective_area_m2=float(_require("fiber", fiber_tbl, "effective_area_m2")),
            material=materials[material_name],
        )

        pump_tbl = raw["pump"]
        pump = Pulse(
            wavelength_m=float(_require("pump", pump_tbl, "wavelength_nm")) * 1e-9,
            fwhm_s=float(_require("pump", pump_tbl, "fwhm_fs")) * 1e-15,
            energy_j=float(_require("pump", pump_tbl, "energy_nj")) * 1e-9,
            shape=pump_tbl.get("shape", "gaussian"),
            polarization_deg=float(pump_tbl.get("polarization_deg", 0.0)),
        )
        if pump.shape not in PULSE_SHAPES:
            raise ConfigError(f"[pump] shape must be one of {PULSE_SHAPES}")

        signal_tbl = raw["signal"]
        profile = SignalProfile(
            kind=signal_tbl.get("profile", "gaussian_rect"),
            fwhm_s=float(signal_tbl.get("profile_fwhm_fs", 100.0)) * 1e-15,
            rect_width_s=float(signal_tbl.get("profile_rect_fs", 380.0)) * 1e-15,
        )

        shutter_tbl = raw["shutter"]
        walkoff_override = shutter_tbl.get("walkoff_ps_per_m")
        shutter = ShutterConfig(
            fiber=fiber,
            pump=pump,
            signal_wavelength_m=float(_require("signal", signal_tbl, "wavelength_nm")) * 1e-9,
            signal_profile=profile,
            theta_deg=float(shutter_tbl.get("theta_deg", 45.0)),
            calibration=float(shutter_tbl.get("calibration", 1.0)),
            walkoff_override_s_per_m=(
                float(walkoff_override) * 1e-12 if walkoff_override is not None else None
            ),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    if "calibration" not in shutter_tbl:
        cal_energy = float(shutter_tbl.get("calibration_energy_nj", 3.0)) * 1e-9
        shutter = calibrate(shutter, energy_j=cal_energy, target_rad=math.pi)
    imperfection = float(shutter_tbl.get("imperfection", 0.967))
    if not 0.0 < imperfection <= 1.0:
        raise ConfigError("[shutter] imperfection must lie in (0, 1]")

    src_tbl = raw["source"]
    g2_target = float(src_tbl.get("g2_target", 0.0076))
    pair_statistics = src_tbl.get("pair_statistics", "two_mode_squeezed")
    if pair_statistics not in PAIR_STATISTICS:
        raise ConfigError(f"[source] pair_statistics must be one of {PAIR_STATISTICS}")
    noise_statistics = src_tbl.get("noise_statistics", "poissonian")
    if noise_statistics not in NOISE_STATISTICS:
        raise ConfigError(f"[source] noise_statistics must be one of {NOISE_STATISTICS}")
    if "mean_pairs" in src_tbl:
        mean_pairs = float(src_tbl["mean_pairs"])
    else:
        mean_pairs = calibrate_mean_pairs(target_g2=g2_target, pair_statistics=pair_statistics)

    try:
        source = SourceModel(
            mean_pairs=mean_pairs,
            pair_statistics=pair_statistics,
            idler_efficiency=float(src_tbl.get("idler_efficiency", 1.0)),
            signal_transmission=float(src_tbl.get("signal_transmission_base", 1.0)),
            noise_mean=0.0,
            noise_statistics=noise_statistics,
            noise_modes=int(src_tbl.get("noise_modes", 15)),
            dark_count_prob=float(src_tbl.get("dark_count_prob", 0.0)),
            analyzer_extinction=float(src_tbl.get("analyzer_extinction", 0.01)),
        )
    except ValueError as exc:
        raise ConfigError(f"[source]: {exc}") from exc

    table = None
    if "noise_table_nj" in src_tbl:
        rows = src_tbl["noise_table_nj"]
        try:
            table = sorted((float(e) * 1e-9, float(v)) for e, v in rows)
        except (TypeError, ValueError) as exc:
            raise ConfigError("[source] noise_table_nj must be a list of [energy_nj, nu] pairs") from exc
    noise = NoiseSpec(
        ref_value=float(src_tbl.get("noise_photons_per_pulse_at_ref", 0.0)),
        ref_energy_j=float(src_tbl.get("noise_reference_energy_nj", 3.0)) * 1e-9,
        exponent=float(src_tbl.get("noise_exponent", 3.0)),
        table=table,
    )

    scan = _build_scan(raw["scan"])

    out_tbl = raw["output"]
    formats = out_tbl.get("formats", ["csv"])
    if not isinstance(formats, list) or any(f != "csv" for f in formats):
        raise ConfigError("[output] formats supports only ['csv']")

    return Scenario(
        raw=raw,
        materials=materials,
        shutter=shutter,
        imperfection=imperfection,
        source=source,
        g2_input_target=g2_target,
        noise=noise,
        scan=scan,
        output_directory=out_tbl.get("directory", "out"),
        output_formats=list(formats),
    )


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, list):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise ConfigError(f"cannot serialize value of type {type(value).__name__}")


def dumps_config(raw: dict) -> str:
    """Serialize a raw config dict back to TOML (round-trips with load_config)."""
    lines = []

    def emit_table(prefix: str, table: dict):
        scalars = {k: v for k, v in table.items() if not isinstance(v, dict)}
        subtables = {k: v for k, v in table.items() if isinstance(v, dict)}
        if prefix:
            lines.append(f"[{prefix}]")
        for key, value in scalars.items():
            lines.append(f"{key} = {_toml_value(value)}")
        if scalars or prefix:
            lines.append("")
        for key, sub in subtables.items():
            emit_table(f"{prefix}.{key}" if prefix else key, sub)

    emit_table("", raw)
    return "\n".join(lines).rstrip() + "\n"


def dump_config(raw: dict, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_config(raw))


def default_config(scan_type: str = "delay") -> dict:
    """A complete scenario dict with the default fiber-shutter parameters."""
    scan: dict
    if scan_type == "delay":
        scan = {"type": "delay", "tau_min_ps": -4.0, "tau_max_ps": 4.0, "steps": 161}
    elif scan_type == "energy":
        scan = {"type": "energy", "energy_min_nj": 0.0, "energy_max_nj": 3.0, "steps": 13}
    elif scan_type == "g2":
        scan = {
            "type": "g2",
            "energy_min_nj": 0.375,
            "energy_max_nj": 3.0,
            "steps": 8,
            "n_pulses": 20_000_000,
            "seed": 20240817,
        }
    else:
        raise ConfigError(f"unknown scan type {scan_type!r}")

    return {
        "fiber": {
            "length_m": 0.10,
            "n2_m2_per_w": 2.7e-20,
            "effective_area_m2": math.pi * (4.5e-6 / 2.0) ** 2,
            "material": "fused_silica",
        },
        "pump": {
            "wavelength_nm": 800.0,
            "fwhm_fs": 410.0,
            "energy_nj": 3.0,
            "shape": "gaussian",
            "polarization_deg": 0.0,
        },
        "signal": {
            "wavelength_nm": 685.0,
            "profile": "gaussian_rect",
            "profile_fwhm_fs": 100.0,
            "profile_rect_fs": 380.0,
        },
        "shutter": {
            "theta_deg": 45.0,
            "calibration_energy_nj": 3.0,
            "imperfection": 0.967,
        },
        "source": {
            "g2_target": 0.0076,
            "pair_statistics": "two_mode_squeezed",
            "idler_efficiency": 1.0,
            "signal_transmission_base": 1.0,
            "noise_photons_per_pulse_at_ref": 1.3e-4,
            "noise_reference_energy_nj": 3.0,
            "noise_exponent": 3.0,
            "noise_statistics": "poissonian",
            "noise_modes": 15,
            "dark_count_prob": 1e-6,
            "analyzer_extinction": 0.01,
        },
        "scan": scan,
        "output": {"directory": "out", "formats": ["csv"]},
    }
