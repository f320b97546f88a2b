"""Counting-statistics estimators: heralded g2, switching efficiencies, SNR,
and the incoherent signal/noise mixture model.

All uncertainties use first-order Poisson propagation on the raw counts
(Var N = N); a zero count contributes variance 1 so that empty tallies
still carry a finite error bar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InsufficientStatisticsError
from .montecarlo import CountsSummary


@dataclass(frozen=True)
class G2Estimate:
    value: float
    std_error: float


@dataclass(frozen=True)
class EfficiencyEstimate:
    value: float
    std_error: float
    inputs: tuple


@dataclass(frozen=True)
class SnrEstimate:
    value: float
    std_error: float
    is_lower_bound: bool = False


def _poisson_var(count: int) -> float:
    # zero counts would otherwise claim zero uncertainty
    return float(max(count, 1))


def heralded_g2(counts: CountsSummary) -> G2Estimate:
    """Heralded second-order autocorrelation at zero delay,

        g2 = (N_12i * N_i) / (N_1i * N_2i),

    the three-fold over two-fold coincidence ratio normalized per herald.
    Requires both two-fold tallies to be non-zero.
    """
    n_i = counts.idler_clicks
    n_1i = counts.two_fold_1i
    n_2i = counts.two_fold_2i
    n_123 = counts.three_fold_12i
    if n_1i == 0 or n_2i == 0:
        raise InsufficientStatisticsError(
            f"need non-zero two-fold coincidences (got {n_1i} and {n_2i})"
        )

    value = n_123 * n_i / (n_1i * n_2i)
    # sigma^2 = sum (dg/dN_k)^2 Var(N_k) over the four counts
    d123 = n_i / (n_1i * n_2i)
    di = n_123 / (n_1i * n_2i)
    d1 = value / n_1i
    d2 = value / n_2i
    var = (
        d123**2 * _poisson_var(n_123)
        + di**2 * _poisson_var(n_i)
        + d1**2 * _poisson_var(n_1i)
        + d2**2 * _poisson_var(n_2i)
    )
    return G2Estimate(value=float(value), std_error=math.sqrt(var))


def expected_g2_mixture(
    n_si: float, n_noise_i: float, g2_input: float, g2_noise: float
) -> float:
    """Autocorrelation of an incoherent mixture of heralded signal (rate n_si,
    autocorrelation g2_input) and noise (rate n_noise_i, g2_noise):

        (n_si^2 g2_in + 2 n_si n_noise + n_noise^2 g2_n) / (n_si + n_noise)^2

    The pure-signal and pure-noise endpoints are returned exactly.
    """
    if n_si < 0 or n_noise_i < 0:
        raise ValueError("rates must be non-negative")
    if n_si + n_noise_i == 0:
        raise ValueError("at least one of the rates must be positive")
    if n_noise_i == 0:
        return g2_input
    if n_si == 0:
        return g2_noise
    total = n_si + n_noise_i
    return (n_si**2 * g2_input + 2.0 * n_si * n_noise_i + n_noise_i**2 * g2_noise) / total**2


def _efficiency_sigma(n_a: int, n_noise: int, n_input: int) -> float:
    # eta = (n_a - n_noise)/n_input; propagate Var N = N on all three counts
    var = (
        (_poisson_var(n_a) + _poisson_var(n_noise)) / n_input**2
        + (n_a - n_noise) ** 2 / n_input**3
    )
    return math.sqrt(var)


def switching_efficiency_estimate(
    n_switch: int, n_noise: int, n_input: int
) -> EfficiencyEstimate:
    """eta_switch = (N_switch - N_noise) / N_input with Poisson error bars."""
    if n_input <= 0:
        raise ValueError("need a positive input count")
    value = (n_switch - n_noise) / n_input
    return EfficiencyEstimate(
        value=value,
        std_error=_efficiency_sigma(n_switch, n_noise, n_input),
        inputs=(n_switch, n_noise, n_input),
    )


def anti_switching_efficiency_estimate(
    n_anti: int, n_noise: int, n_input: int
) -> EfficiencyEstimate:
    """eta_anti = 1 - (N_anti - N_noise) / N_input with Poisson error bars."""
    if n_input <= 0:
        raise ValueError("need a positive input count")
    value = 1.0 - (n_anti - n_noise) / n_input
    return EfficiencyEstimate(
        value=value,
        std_error=_efficiency_sigma(n_anti, n_noise, n_input),
        inputs=(n_anti, n_noise, n_input),
    )


def snr(n_switch: int, n_noise: int) -> SnrEstimate:
    """Signal-to-noise ratio N_switch / N_noise with Poisson error bars.

    With zero recorded noise counts the ratio is unbounded; the estimate is
    then reported as a lower bound N_switch (one noise count assumed) with
    is_lower_bound set.
    """
    if n_switch < 0 or n_noise < 0:
        raise ValueError("counts must be non-negative")
    if n_noise == 0:
        value = float(n_switch)
        return SnrEstimate(value=value, std_error=math.sqrt(max(n_switch, 1)), is_lower_bound=True)
    value = n_switch / n_noise
    sigma = value * math.sqrt(1.0 / _poisson_var(n_switch) + 1.0 / _poisson_var(n_noise))
    return SnrEstimate(value=value, std_error=sigma, is_lower_bound=False)
