"""Material dispersion from Sellmeier models.

A material is a list of resonance terms (B_i, C_i) with C_i in um^2,

    n^2(lambda) = 1 + sum_i B_i lambda^2 / (lambda^2 - C_i),

valid on an explicit wavelength window.  Evaluation outside the window
raises; there is no silent extrapolation.  The group index is computed from
the analytic derivative of the Sellmeier form, not finite differences:

    dn/dlambda = -(lambda / n) sum_i B_i C_i / (lambda^2 - C_i)^2
    n_g = n - lambda dn/dlambda

Wavelength arguments are SI (meters); the coefficients keep their
conventional um^2 units and conversion happens internally.

The bundled fused-silica coefficients are the standard three-term set
(Malitson 1965), valid 0.21-3.71 um.  Other materials load from the config
file (see config.py).
"""

from __future__ import annotations

from dataclasses import dataclass

from scipy.constants import c as SPEED_OF_LIGHT

from .errors import WavelengthRangeError


@dataclass(frozen=True)
class SellmeierCoefficients:
    """Sellmeier resonance terms (B_i dimensionless, C_i in um^2) and validity window in um.

    B_i = 0 (vacuum-like term) and C_i = 0 (dispersionless term) are accepted;
    negative values are not.
    """

    terms: tuple[tuple[float, float], ...]
    valid_range_um: tuple[float, float]

    def __post_init__(self):
        if len(self.terms) == 0:
            raise ValueError("Sellmeier model needs at least one (B, C) term")
        for b, c_um2 in self.terms:
            if b < 0 or c_um2 < 0:
                raise ValueError(f"Sellmeier coefficients must be non-negative, got ({b}, {c_um2})")
        lo, hi = self.valid_range_um
        if not (0 < lo < hi):
            raise ValueError(f"invalid wavelength validity range {self.valid_range_um}")


@dataclass(frozen=True)
class DispersionResult:
    """Phase index, group index, and group velocity (m/s) at one wavelength."""

    n_phase: float
    n_group: float
    group_velocity: float


# Fused silica, three-term model (Malitson 1965), C_i in um^2.
FUSED_SILICA = SellmeierCoefficients(
    terms=(
        (0.6961663, 0.0684043**2),
        (0.4079426, 0.1162414**2),
        (0.8974794, 9.896161**2),
    ),
    valid_range_um=(0.21, 3.71),
)


def _check_range(coeffs: SellmeierCoefficients, wavelength_m: float, strict: bool) -> float:
    lam_um = wavelength_m * 1e6
    lo, hi = coeffs.valid_range_um
    inside = lo < lam_um < hi if strict else lo <= lam_um <= hi
    if not inside:
        kind = "strictly inside" if strict else "inside"
        raise WavelengthRangeError(
            f"wavelength {lam_um:.4f} um not {kind} validity range [{lo}, {hi}] um"
        )
    return lam_um


def refractive_index(coeffs: SellmeierCoefficients, wavelength_m: float) -> float:
    """Phase refractive index n(lambda) from the Sellmeier sum."""
    lam_um = _check_range(coeffs, wavelength_m, strict=False)
    lam2 = lam_um * lam_um
    n2 = 1.0
    for b, c_um2 in coeffs.terms:
        n2 += b * lam2 / (lam2 - c_um2)
    if n2 <= 0:
        raise WavelengthRangeError(
            f"Sellmeier sum non-physical (n^2 = {n2:.4g}) at {lam_um:.4f} um; "
            "wavelength too close to a resonance"
        )
    return n2**0.5


def group_index(coeffs: SellmeierCoefficients, wavelength_m: float) -> DispersionResult:
    """Group index n_g = n - lambda dn/dlambda and group velocity c/n_g.

    The derivative is the exact analytic derivative of the Sellmeier form.
    Requires lambda strictly inside the validity range.
    """
    lam_um = _check_range(coeffs, wavelength_m, strict=True)
    n = refractive_index(coeffs, wavelength_m)
    lam2 = lam_um * lam_um
    # d(n^2)/dlambda = -2 lambda sum B_i C_i / (lambda^2 - C_i)^2, lambda in um
    dn = 0.0
    for b, c_um2 in coeffs.terms:
        dn -= b * c_um2 / (lam2 - c_um2) ** 2
    dn *= lam_um / n
    n_g = n - lam_um * dn
    return DispersionResult(n_phase=n, n_group=n_g, group_velocity=SPEED_OF_LIGHT / n_g)


def walkoff(
    coeffs: SellmeierCoefficients, pump_wavelength_m: float, signal_wavelength_m: float
) -> float:
    """Differential inverse group velocity d_w = 1/v_gp - 1/v_gs in s/m.

    Signed: positive when the pump is slower than the signal (larger group
    index), so that pump-minus-signal delay grows along the fiber by
    d_w * z.  Antisymmetric under swapping the two wavelengths.
    """
    n_gp = group_index(coeffs, pump_wavelength_m).n_group
    n_gs = group_index(coeffs, signal_wavelength_m).n_group
    return (n_gp - n_gs) / SPEED_OF_LIGHT
