"""Analytic pulse intensity profiles.

A Pulse carries SI fields (meters, seconds, joules) plus its polarization
angle in degrees from horizontal.  Intensity profiles are peak-normalized
analytic shapes scaled so that

    integral I(t) dt * effective_area = pulse energy.

The gaussian profile has its FWHM equal to the pulse's fwhm_s; sech^2 is
offered for oscillator-like pulses and obeys the same normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# FWHM of exp(-t^2 / (2 sigma^2)) is 2 sqrt(2 ln 2) sigma.
GAUSSIAN_FWHM_TO_SIGMA = 1.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))
# sech^2(a t) falls to 1/2 at a t = arccosh(sqrt(2)).
_SECH2_RATE = 2.0 * math.acosh(math.sqrt(2.0))

PULSE_SHAPES = ("gaussian", "sech2")


@dataclass(frozen=True)
class Pulse:
    """Pump or signal pulse: center wavelength (m), FWHM duration (s), energy (J)."""

    wavelength_m: float
    fwhm_s: float
    energy_j: float
    shape: str = "gaussian"
    polarization_deg: float = 0.0

    def __post_init__(self):
        if self.wavelength_m <= 0:
            raise ValueError("wavelength must be positive")
        if self.fwhm_s <= 0:
            raise ValueError("FWHM duration must be positive")
        if self.energy_j < 0:
            raise ValueError("pulse energy must be non-negative")
        if self.shape not in PULSE_SHAPES:
            raise ValueError(f"unknown pulse shape {self.shape!r}, expected one of {PULSE_SHAPES}")


def peak_intensity(pulse: Pulse, area_m2: float) -> float:
    """Peak intensity I_0 in W/m^2 for the given effective area."""
    if area_m2 <= 0:
        raise ValueError("effective area must be positive")
    if pulse.shape == "gaussian":
        sigma = pulse.fwhm_s * GAUSSIAN_FWHM_TO_SIGMA
        return pulse.energy_j / (area_m2 * sigma * math.sqrt(2.0 * math.pi))
    # sech^2: integral I0 sech^2(a t) dt = 2 I0 / a
    a = _SECH2_RATE / pulse.fwhm_s
    return pulse.energy_j * a / (2.0 * area_m2)


def pulse_intensity(pulse: Pulse, area_m2: float, t_s):
    """Intensity I(t) in W/m^2 at time(s) t_s relative to the pulse peak.

    Accepts a scalar or ndarray of times.
    """
    i0 = peak_intensity(pulse, area_m2)
    t = np.asarray(t_s, dtype=float)
    if pulse.shape == "gaussian":
        sigma = pulse.fwhm_s * GAUSSIAN_FWHM_TO_SIGMA
        out = i0 * np.exp(-0.5 * (t / sigma) ** 2)
    else:
        a = _SECH2_RATE / pulse.fwhm_s
        out = i0 / np.cosh(a * t) ** 2
    if np.isscalar(t_s):
        return float(out)
    return out
