"""Kerr-shutter model: delay-dependent nonlinear phase, rotation efficiency,
response curves, and pump-energy scans.

Phase accumulated by a signal photon crossing a fiber of length L while a
pump pulse sweeps through it:

    dphi(tau) = (2 pi n2 cal / lambda_signal) * integral_0^L I_p(tau + d_w (z - L/2)) dz

where d_w = 1/v_gp - 1/v_gs is the differential inverse group velocity
(s/m) and I_p the pump intensity profile (W/m^2).  The z-integral is done
by step-halving Simpson quadrature (quadrature.py).

Delay convention: tau = 0 places the pump peak on the signal at the fiber
midpoint, i.e. the pump-peak arrival at the input is offset by -d_w L / 2
from the signal.  Positive tau means the pump enters the fiber later than
that centered reference.  With this choice the response curve is symmetric
about zero delay and its flat top is centered, matching how delay scans are
plotted.

Rotation efficiency between crossed polarizers, for angle theta between
pump and signal polarizations:

    eta = sin^2(2 theta) sin^2(dphi / 2)

equivalently the projection of the pump-induced retarder (kerr_jones_matrix)
onto the orthogonal analyzer port.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

from .errors import CurveShapeError
from .jones import retarder
from .materials import SellmeierCoefficients, walkoff
from .pulses import GAUSSIAN_FWHM_TO_SIGMA, Pulse, pulse_intensity
from .quadrature import simpson_converged

# Largest tau-batch evaluated at once, and the refinement cap; together they
# bound the (tau, z-node) intensity matrix to ~256 MB in the worst case.
_BATCH_CHUNK = 1024
_MAX_LEVELS = 12


@dataclass(frozen=True)
class FiberSpec:
    """Kerr medium: length (m), nonlinear index n2 (m^2/W), effective area (m^2)."""

    length_m: float
    nonlinear_index_m2_per_w: float
    effective_area_m2: float
    material: SellmeierCoefficients

    def __post_init__(self):
        if self.length_m <= 0:
            raise ValueError("fiber length must be positive")
        if self.nonlinear_index_m2_per_w <= 0:
            raise ValueError("nonlinear index must be positive")
        if self.effective_area_m2 <= 0:
            raise ValueError("effective area must be positive")


@dataclass(frozen=True)
class SignalProfile:
    """Normalized temporal weight of the signal photon.

    Kinds: "delta" (instantaneous), "gaussian"/"sech2" (FWHM fwhm_s), or
    "gaussian_rect" (gaussian of FWHM fwhm_s convolved with a rectangle of
    width rect_width_s, the source-fiber walk-off window).  The weight
    integrates to one; it carries no energy.
    """

    kind: str = "gaussian_rect"
    fwhm_s: float = 100e-15
    rect_width_s: float = 380e-15

    def __post_init__(self):
        if self.kind not in ("delta", "gaussian", "sech2", "gaussian_rect"):
            raise ValueError(f"unknown signal profile kind {self.kind!r}")
        if self.kind != "delta" and self.fwhm_s <= 0:
            raise ValueError("profile FWHM must be positive")
        if self.kind == "gaussian_rect" and self.rect_width_s <= 0:
            raise ValueError("rectangle width must be positive")

    def weight(self, t_s):
        """Normalized weight w(t); integral over t is 1."""
        t = np.asarray(t_s, dtype=float)
        if self.kind == "delta":
            raise ValueError("delta profile has no density; handled by convolution identity")
        if self.kind == "gaussian":
            sigma = self.fwhm_s * GAUSSIAN_FWHM_TO_SIGMA
            return np.exp(-0.5 * (t / sigma) ** 2) / (sigma * math.sqrt(2.0 * math.pi))
        if self.kind == "sech2":
            a = 2.0 * math.acosh(math.sqrt(2.0)) / self.fwhm_s
            return (a / 2.0) / np.cosh(a * t) ** 2
        sigma = self.fwhm_s * GAUSSIAN_FWHM_TO_SIGMA
        half = self.rect_width_s / 2.0
        s2 = sigma * math.sqrt(2.0)
        return (erf((t + half) / s2) - erf((t - half) / s2)) / (2.0 * self.rect_width_s)

    def support(self) -> tuple[float, float]:
        """Interval outside which the weight is negligible (< 1e-12 of peak)."""
        if self.kind == "delta":
            return (0.0, 0.0)
        if self.kind == "sech2":
            half = 9.0 * self.fwhm_s
        elif self.kind == "gaussian":
            half = 8.0 * self.fwhm_s * GAUSSIAN_FWHM_TO_SIGMA
        else:
            half = self.rect_width_s / 2.0 + 8.0 * self.fwhm_s * GAUSSIAN_FWHM_TO_SIGMA
        return (-half, half)


@dataclass(frozen=True)
class ShutterConfig:
    """Complete shutter scenario: fiber, pump pulse, signal, polarization geometry.

    theta_deg is the angle between pump and signal polarizations.  The
    calibration scalar multiplies n2 and absorbs the uncertainty in the
    effective cross-polarized nonlinearity (see calibrate()).  If
    walkoff_override_s_per_m is set it replaces the Sellmeier-derived
    pump-signal walk-off.
    """

    fiber: FiberSpec
    pump: Pulse
    signal_wavelength_m: float
    signal_profile: SignalProfile = field(default_factory=SignalProfile)
    theta_deg: float = 45.0
    calibration: float = 1.0
    walkoff_override_s_per_m: float | None = None

    def __post_init__(self):
        if self.signal_wavelength_m <= 0:
            raise ValueError("signal wavelength must be positive")
        if not 0.0 <= self.theta_deg <= 90.0:
            raise ValueError("theta must lie in [0, 90] degrees")
        if self.calibration <= 0:
            raise ValueError("calibration scalar must be positive")

    def walkoff_s_per_m(self) -> float:
        """Pump-signal differential inverse group velocity d_w in s/m."""
        if self.walkoff_override_s_per_m is not None:
            return self.walkoff_override_s_per_m
        return walkoff(self.fiber.material, self.pump.wavelength_m, self.signal_wavelength_m)

    def snapshot(self) -> dict:
        """Flat record of the scenario for manifests and curve metadata."""
        return {
            "fiber_length_m": self.fiber.length_m,
            "n2_m2_per_w": self.fiber.nonlinear_index_m2_per_w,
            "effective_area_m2": self.fiber.effective_area_m2,
            "pump_wavelength_m": self.pump.wavelength_m,
            "pump_fwhm_s": self.pump.fwhm_s,
            "pump_energy_j": self.pump.energy_j,
            "pump_shape": self.pump.shape,
            "signal_wavelength_m": self.signal_wavelength_m,
            "signal_profile": self.signal_profile.kind,
            "theta_deg": self.theta_deg,
            "calibration": self.calibration,
            "walkoff_s_per_m": self.walkoff_s_per_m(),
        }


@dataclass
class ResponseCurve:
    """Sampled delay-response: delays (s, strictly increasing) and efficiencies in [0,1]."""

    delays_s: np.ndarray
    efficiency: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.delays_s = np.asarray(self.delays_s, dtype=float)
        self.efficiency = np.asarray(self.efficiency, dtype=float)
        if self.delays_s.ndim != 1 or self.delays_s.shape != self.efficiency.shape:
            raise ValueError("delays and efficiencies must be matching 1-d arrays")
        if self.delays_s.size > 1 and not np.all(np.diff(self.delays_s) > 0):
            raise ValueError("delays must be strictly increasing")
        if np.any(self.efficiency < -1e-9) or np.any(self.efficiency > 1.0 + 1e-9):
            raise ValueError("efficiencies must lie in [0, 1]")
        self.efficiency = np.clip(self.efficiency, 0.0, 1.0)


@dataclass
class EnergyScanResult:
    """Efficiency vs pump energy at fixed delay, with the phase-per-energy constant kappa."""

    energies_j: np.ndarray
    efficiency: np.ndarray
    kappa_rad_per_j: float
    metadata: dict = field(default_factory=dict)


def _phase_batch(config: ShutterConfig, taus: np.ndarray, rel_tol: float) -> np.ndarray:
    """Nonlinear phase (rad) for an array of pump delays, by z-quadrature."""
    taus = np.asarray(taus, dtype=float)
    fiber = config.fiber
    d_w = config.walkoff_s_per_m()
    prefactor = (
        2.0
        * math.pi
        * fiber.nonlinear_index_m2_per_w
        * config.calibration
        / config.signal_wavelength_m
    )
    if config.pump.energy_j == 0.0:
        return np.zeros(taus.shape)

    out = np.empty(taus.shape)
    flat = taus.reshape(-1)
    length = fiber.length_m
    for start in range(0, flat.size, _BATCH_CHUNK):
        chunk = flat[start : start + _BATCH_CHUNK]

        def integrand(z_nodes, _chunk=chunk):
            t = _chunk[:, None] + d_w * (z_nodes[None, :] - length / 2.0)
            return pulse_intensity(config.pump, fiber.effective_area_m2, t)

        integral, _ = simpson_converged(
            integrand,
            0.0,
            length,
            rel_tol=rel_tol,
            abs_floor=1e-12 / max(prefactor, 1e-300),
            max_levels=_MAX_LEVELS,
        )
        out.reshape(-1)[start : start + _BATCH_CHUNK] = prefactor * integral
    return out


def nonlinear_phase(config: ShutterConfig, tau_s: float, rel_tol: float = 1e-6) -> float:
    """Nonlinear phase shift dphi(tau) in radians for one pump delay.

    Converged to rel_tol under step-halving of the z-grid; raises
    QuadratureError with diagnostics if that fails.
    """
    return float(_phase_batch(config, np.array([tau_s]), rel_tol)[0])


def switching_efficiency(theta_deg: float, dphi_rad: float) -> float:
    """Rotation efficiency sin^2(2 theta) sin^2(dphi / 2)."""
    theta = math.radians(theta_deg)
    return math.sin(2.0 * theta) ** 2 * math.sin(dphi_rad / 2.0) ** 2


def kerr_jones_matrix(dphi_rad: float, pump_angle_deg: float = 0.0) -> np.ndarray:
    """Jones matrix of the pump-induced birefringence: a retarder of
    retardance dphi with fast axis along the pump polarization.

    Projecting (this matrix @ signal at angle pump_angle - theta) onto the
    orthogonal analyzer port reproduces switching_efficiency(theta, dphi).
    """
    return retarder(dphi_rad, fast_axis_deg=pump_angle_deg)


def intrinsic_response(
    config: ShutterConfig,
    delays_s,
    rel_tol: float = 1e-6,
    imperfection: float = 1.0,
) -> ResponseCurve:
    """Delay response of the shutter itself (no signal-duration averaging).

    For a walk-through geometry this is a flat-topped curve of width about
    |d_w| L.  The optional imperfection scalar multiplies the ideal curve to
    model the measured plateau.
    """
    delays = np.asarray(delays_s, dtype=float)
    phases = _phase_batch(config, delays, rel_tol)
    eta = imperfection * np.sin(math.radians(2.0 * config.theta_deg)) ** 2 * np.sin(phases / 2.0) ** 2
    meta = config.snapshot()
    meta.update({"rel_tol": rel_tol, "imperfection": imperfection, "kind": "intrinsic"})
    return ResponseCurve(delays, eta, meta)


def total_response(
    config: ShutterConfig,
    delays_s,
    rel_tol: float = 1e-6,
    imperfection: float = 1.0,
) -> ResponseCurve:
    """Response seen by the signal photon: intrinsic response averaged over
    the photon's normalized temporal weight,

        eta_tot(tau) = integral eta_intr(tau - t) w_signal(t) dt.

    A delta signal profile reduces to the intrinsic response exactly.
    """
    delays = np.asarray(delays_s, dtype=float)
    profile = config.signal_profile
    if profile.kind == "delta":
        curve = intrinsic_response(config, delays, rel_tol, imperfection)
        curve.metadata["kind"] = "total"
        return curve

    lo, hi = profile.support()

    def integrand(t_nodes):
        grid = delays[:, None] - t_nodes[None, :]
        phases = _phase_batch(config, grid, rel_tol)
        eta = np.sin(math.radians(2.0 * config.theta_deg)) ** 2 * np.sin(phases / 2.0) ** 2
        return eta * profile.weight(t_nodes)[None, :]

    eta_tot, _ = simpson_converged(
        integrand, lo, hi, rel_tol=rel_tol, abs_floor=1e-12, max_levels=_MAX_LEVELS
    )
    eta_tot = imperfection * np.clip(eta_tot, 0.0, 1.0)
    meta = config.snapshot()
    meta.update({"rel_tol": rel_tol, "imperfection": imperfection, "kind": "total"})
    return ResponseCurve(delays, eta_tot, meta)


def energy_scan(
    config: ShutterConfig,
    energies_j,
    tau_s: float = 0.0,
    rel_tol: float = 1e-6,
    imperfection: float = 1.0,
) -> EnergyScanResult:
    """Efficiency vs pump energy at fixed delay.

    The phase is linear in pump energy, so the curve follows
    sin^2(2 theta) sin^2(kappa E / 2); kappa (rad/J) is reported from the
    highest-energy point.
    """
    energies = np.asarray(energies_j, dtype=float)
    if np.any(energies < 0):
        raise ValueError("pump energies must be non-negative")
    if energies.size > 1 and not np.all(np.diff(energies) > 0):
        raise ValueError("energies must be strictly increasing")

    sin_2theta_sq = math.sin(math.radians(2.0 * config.theta_deg)) ** 2
    eff = np.zeros(energies.shape)
    phases = np.zeros(energies.shape)
    for i, e in enumerate(energies):
        if e == 0.0:
            continue
        cfg_e = dataclasses.replace(config, pump=dataclasses.replace(config.pump, energy_j=float(e)))
        phases[i] = nonlinear_phase(cfg_e, tau_s, rel_tol)
        eff[i] = imperfection * sin_2theta_sq * math.sin(phases[i] / 2.0) ** 2

    # kappa from the largest sampled energy; fall back to a 1 nJ reference
    if energies.size and energies[-1] > 0:
        kappa = float(phases[-1] / energies[-1])
    else:
        ref = 1e-9
        cfg_ref = dataclasses.replace(config, pump=dataclasses.replace(config.pump, energy_j=ref))
        kappa = nonlinear_phase(cfg_ref, tau_s, rel_tol) / ref

    meta = config.snapshot()
    meta.update({"rel_tol": rel_tol, "imperfection": imperfection, "tau_s": tau_s})
    return EnergyScanResult(energies, eff, kappa, meta)


def fwhm(curve: ResponseCurve) -> float:
    """Full width at half maximum of a sampled curve, edges interpolated linearly.

    Requires the curve to rise through half-max and fall back within the
    sampled window; otherwise raises CurveShapeError.
    """
    y = curve.efficiency
    x = curve.delays_s
    if y.size < 3:
        raise CurveShapeError("need at least three samples to measure a width")
    peak = float(y.max())
    if peak <= 0.0:
        raise CurveShapeError("curve has no positive maximum")
    half = peak / 2.0

    above = y >= half
    i_first = int(np.argmax(above))
    i_last = int(len(above) - 1 - np.argmax(above[::-1]))
    if i_first == 0 or i_last == len(above) - 1:
        raise CurveShapeError("curve does not cross half-maximum inside the sampled window")

    def interp(i_lo, i_hi):
        x0, x1 = x[i_lo], x[i_hi]
        y0, y1 = y[i_lo], y[i_hi]
        return x0 + (half - y0) * (x1 - x0) / (y1 - y0)

    left = interp(i_first - 1, i_first)
    right = interp(i_last, i_last + 1)
    return float(right - left)


def calibrate(
    config: ShutterConfig,
    energy_j: float = 3.0e-9,
    target_rad: float = math.pi,
    tau_s: float = 0.0,
    rel_tol: float = 1e-6,
) -> ShutterConfig:
    """Return a copy of config with the calibration scalar fixed so that
    dphi(tau_s) = target_rad at the given pump energy.

    The phase is linear in the calibration scalar, so one quadrature
    evaluation suffices.
    """
    if energy_j <= 0:
        raise ValueError("calibration energy must be positive")
    cfg_e = dataclasses.replace(config, pump=dataclasses.replace(config.pump, energy_j=energy_j))
    current = nonlinear_phase(cfg_e, tau_s, rel_tol)
    if current <= 0:
        raise ValueError("cannot calibrate: phase is zero at the calibration point")
    return dataclasses.replace(config, calibration=config.calibration * target_rad / current)
