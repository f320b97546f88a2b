"""Pulse profile tests: normalization, FWHM definition, scaling."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from kerrshutter import Pulse, peak_intensity, pulse_intensity


def _numeric_energy(pulse, area):
    # independent normalization check via adaptive quadrature
    span = 20 * pulse.fwhm_s
    value, _ = quad(lambda t: pulse_intensity(pulse, area, t), -span, span, limit=200)
    return value * area


@pytest.mark.parametrize("shape", ["gaussian", "sech2"])
def test_energy_normalization(shape):
    pulse = Pulse(wavelength_m=800e-9, fwhm_s=410e-15, energy_j=3.0e-9, shape=shape)
    area = 1.6e-11
    assert _numeric_energy(pulse, area) == pytest.approx(3.0e-9, rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(
    fwhm_fs=st.floats(min_value=20.0, max_value=5000.0),
    energy_nj=st.floats(min_value=1e-4, max_value=100.0),
    shape=st.sampled_from(["gaussian", "sech2"]),
)
def test_energy_normalization_sweep(fwhm_fs, energy_nj, shape):
    pulse = Pulse(wavelength_m=800e-9, fwhm_s=fwhm_fs * 1e-15, energy_j=energy_nj * 1e-9, shape=shape)
    assert _numeric_energy(pulse, 1.6e-11) == pytest.approx(pulse.energy_j, rel=1e-9)


@pytest.mark.parametrize("shape", ["gaussian", "sech2"])
def test_half_max_at_half_fwhm(shape):
    pulse = Pulse(wavelength_m=800e-9, fwhm_s=410e-15, energy_j=3.0e-9, shape=shape)
    area = 1.6e-11
    i_peak = pulse_intensity(pulse, area, 0.0)
    assert i_peak == pytest.approx(peak_intensity(pulse, area))
    for sign in (-1, 1):
        assert pulse_intensity(pulse, area, sign * pulse.fwhm_s / 2) == pytest.approx(
            i_peak / 2, rel=1e-12
        )


def test_peak_scales_linearly_with_energy():
    area = 1.6e-11
    base = Pulse(wavelength_m=800e-9, fwhm_s=410e-15, energy_j=1.5e-9)
    double = Pulse(wavelength_m=800e-9, fwhm_s=410e-15, energy_j=3.0e-9)
    assert peak_intensity(double, area) == pytest.approx(2 * peak_intensity(base, area), rel=1e-12)


def test_vectorized_times():
    pulse = Pulse(wavelength_m=800e-9, fwhm_s=410e-15, energy_j=3.0e-9)
    t = np.linspace(-1e-12, 1e-12, 7)
    values = pulse_intensity(pulse, 1.6e-11, t)
    assert values.shape == t.shape
    assert np.all(values > 0)
    assert values.argmax() == 3


def test_zero_energy_pulse_is_dark():
    pulse = Pulse(wavelength_m=800e-9, fwhm_s=410e-15, energy_j=0.0)
    assert pulse_intensity(pulse, 1.6e-11, 0.0) == 0.0


def test_validation():
    with pytest.raises(ValueError):
        Pulse(wavelength_m=-800e-9, fwhm_s=410e-15, energy_j=1e-9)
    with pytest.raises(ValueError):
        Pulse(wavelength_m=800e-9, fwhm_s=0.0, energy_j=1e-9)
    with pytest.raises(ValueError):
        Pulse(wavelength_m=800e-9, fwhm_s=410e-15, energy_j=-1e-9)
    with pytest.raises(ValueError):
        Pulse(wavelength_m=800e-9, fwhm_s=410e-15, energy_j=1e-9, shape="square")
    with pytest.raises(ValueError):
        pulse_intensity(Pulse(800e-9, 410e-15, 1e-9), -1e-11, 0.0)
