"""Simulator for an ultrafast all-optical fiber Kerr shutter acting on
heralded single photons: dispersion and walk-off, delay-dependent nonlinear
phase and switching efficiency, and Monte Carlo photon-counting statistics.
"""

from ._version import __version__
from .errors import (
    ConfigError,
    CurveShapeError,
    InsufficientStatisticsError,
    KerrShutterError,
    QuadratureError,
    WavelengthRangeError,
)
from .estimators import (
    EfficiencyEstimate,
    G2Estimate,
    SnrEstimate,
    anti_switching_efficiency_estimate,
    expected_g2_mixture,
    heralded_g2,
    snr,
    switching_efficiency_estimate,
)
from .expectations import calibrate_mean_pairs, expected_heralded_g2, expected_heralded_rates
from .jones import linear_jones, projection_probability, retarder, rotation
from .materials import (
    FUSED_SILICA,
    DispersionResult,
    SellmeierCoefficients,
    group_index,
    refractive_index,
    walkoff,
)
from .montecarlo import (
    CountsSummary,
    SourceModel,
    chunk_seed,
    flat_record,
    merge_counts,
    model_hash,
    simulate_pulses,
)
from .pulses import Pulse, peak_intensity, pulse_intensity
from .shutter import (
    EnergyScanResult,
    FiberSpec,
    ResponseCurve,
    ShutterConfig,
    SignalProfile,
    calibrate,
    energy_scan,
    fwhm,
    intrinsic_response,
    kerr_jones_matrix,
    nonlinear_phase,
    switching_efficiency,
    total_response,
)
from .config import Scenario, build_scenario, default_config, dump_config, load_config
from .scans import run_delay_scan, run_energy_scan, run_g2_scan, run_scan

__all__ = [
    "__version__",
    "KerrShutterError",
    "ConfigError",
    "WavelengthRangeError",
    "QuadratureError",
    "InsufficientStatisticsError",
    "CurveShapeError",
    "SellmeierCoefficients",
    "DispersionResult",
    "FUSED_SILICA",
    "refractive_index",
    "group_index",
    "walkoff",
    "Pulse",
    "peak_intensity",
    "pulse_intensity",
    "linear_jones",
    "rotation",
    "retarder",
    "projection_probability",
    "FiberSpec",
    "SignalProfile",
    "ShutterConfig",
    "ResponseCurve",
    "EnergyScanResult",
    "nonlinear_phase",
    "switching_efficiency",
    "kerr_jones_matrix",
    "intrinsic_response",
    "total_response",
    "energy_scan",
    "fwhm",
    "calibrate",
    "SourceModel",
    "CountsSummary",
    "simulate_pulses",
    "merge_counts",
    "chunk_seed",
    "model_hash",
    "flat_record",
    "G2Estimate",
    "EfficiencyEstimate",
    "SnrEstimate",
    "heralded_g2",
    "expected_g2_mixture",
    "switching_efficiency_estimate",
    "anti_switching_efficiency_estimate",
    "snr",
    "expected_heralded_g2",
    "expected_heralded_rates",
    "calibrate_mean_pairs",
    "Scenario",
    "load_config",
    "build_scenario",
    "default_config",
    "dump_config",
    "run_delay_scan",
    "run_energy_scan",
    "run_g2_scan",
    "run_scan",
]
