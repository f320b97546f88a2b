"""Exact expectations of the counting estimators by enumerating photon-number
outcomes, truncated at a configurable maximum (default 20).

These provide the analytic route against which the Monte Carlo sampler is
checked, plus the root-finding used to pin the pair rate to a target
heralded g2.  Valid for mean photon numbers well below the truncation
(tail mass ~ mu^(n_max+1)).
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq
from scipy.stats import nbinom, poisson

from .montecarlo import SourceModel

N_MAX = 20


def pair_pmf(mean_pairs: float, statistics: str, n_max: int = N_MAX) -> np.ndarray:
    """P(n) for the pair-number distribution, truncated at n_max."""
    n = np.arange(n_max + 1)
    if statistics == "two_mode_squeezed":
        return mean_pairs**n / (1.0 + mean_pairs) ** (n + 1)
    if statistics == "poissonian":
        return poisson.pmf(n, mean_pairs)
    raise ValueError(f"unknown pair statistics {statistics!r}")


def noise_pmf(noise_mean: float, statistics: str, modes: int = 15, n_max: int = N_MAX) -> np.ndarray:
    """P(m) for the per-pulse noise photon number, truncated at n_max."""
    m = np.arange(n_max + 1)
    if noise_mean == 0.0:
        out = np.zeros(n_max + 1)
        out[0] = 1.0
        return out
    if statistics == "poissonian":
        return poisson.pmf(m, noise_mean)
    if statistics == "thermal":
        p = modes / (modes + noise_mean)
        return nbinom.pmf(m, modes, p)
    raise ValueError(f"unknown noise statistics {statistics!r}")


def _click_probabilities(model: SourceModel, n_max: int):
    """Exact per-pulse probabilities (P_i, P_1i, P_2i, P_12i) at the switched port."""
    pn = pair_pmf(model.mean_pairs, model.pair_statistics, n_max)
    qm = noise_pmf(model.noise_mean, model.noise_statistics, model.noise_modes, n_max)
    dark = model.dark_count_prob
    eta_s = model.signal_transmission

    n = np.arange(n_max + 1)
    herald = 1.0 - (1.0 - model.idler_efficiency) ** n
    herald = 1.0 - (1.0 - herald) * (1.0 - dark)

    # distribution of transmitted signal photons k, marginalized over n
    pk = np.zeros(n_max + 1)
    herald_pk = np.zeros(n_max + 1)
    for n_i in range(n_max + 1):
        if pn[n_i] == 0.0:
            continue
        k = np.arange(n_i + 1)
        binom_pmf = (
            np.array([_binom(n_i, int(kk)) for kk in k])
            * eta_s**k
            * (1.0 - eta_s) ** (n_i - k)
        )
        pk[: n_i + 1] += pn[n_i] * binom_pmf
        herald_pk[: n_i + 1] += pn[n_i] * herald[n_i] * binom_pmf

    p_i = float(herald_pk.sum())

    # port photons j = k + m; click probabilities given j, including darks
    j = np.arange(2 * n_max + 1)
    half = 0.5**j
    p_one = 1.0 - half * (1.0 - dark)
    p_both = 1.0 - 2.0 * half * (1.0 - dark) + (j == 0) * (1.0 - dark) ** 2

    pj = np.convolve(pk, qm)
    herald_pj = np.convolve(herald_pk, qm)
    p_1 = float((pj * p_one).sum())
    p_1i = float((herald_pj * p_one).sum())
    p_12i = float((herald_pj * p_both).sum())
    return p_i, p_1, p_1i, p_12i


def _binom(n: int, k: int) -> float:
    from math import comb

    return float(comb(n, k))


def expected_heralded_g2(model: SourceModel, n_max: int = N_MAX) -> float:
    """Large-sample expectation of the heralded g2 click estimator,

        g2 = P_12i P_i / (P_1i P_2i),

    computed exactly from the truncated photon-number enumeration.
    """
    p_i, _, p_1i, p_12i = _click_probabilities(model, n_max)
    if p_1i == 0.0 or p_i == 0.0:
        raise ValueError("model produces no heralded coincidences")
    return p_12i * p_i / (p_1i * p_1i)


def expected_heralded_rates(model: SourceModel, n_max: int = N_MAX) -> tuple[float, float]:
    """Expected per-pulse heralded photon numbers (signal, noise) at the port.

    These are photon-number rates, not click rates; at the operating rates of
    interest (<< 1 per pulse) the distinction is second order.  Used as the
    inputs of the incoherent mixture model.
    """
    pn = pair_pmf(model.mean_pairs, model.pair_statistics, n_max)
    n = np.arange(n_max + 1)
    herald = 1.0 - (1.0 - model.idler_efficiency) ** n
    herald = 1.0 - (1.0 - herald) * (1.0 - model.dark_count_prob)
    n_si = float((pn * herald * n).sum() * model.signal_transmission)
    p_i = float((pn * herald).sum())
    n_noise_i = p_i * model.noise_mean
    return n_si, n_noise_i


def calibrate_mean_pairs(
    target_g2: float = 0.0076,
    pair_statistics: str = "two_mode_squeezed",
    idler_efficiency: float = 1.0,
    signal_transmission: float = 1.0,
    dark_count_prob: float = 0.0,
    n_max: int = N_MAX,
) -> float:
    """Mean pair number whose noise-free heralded g2 equals target_g2.

    Root-found on the exact enumeration; defaults correspond to ideal
    detection, where the thermal-pair g2 is approximately 2 mu.
    """
    if not 0.0 < target_g2 < 1.0:
        raise ValueError("target g2 must lie in (0, 1) for a heralded pair source")

    def objective(mu):
        model = SourceModel(
            mean_pairs=mu,
            pair_statistics=pair_statistics,
            idler_efficiency=idler_efficiency,
            signal_transmission=signal_transmission,
            noise_mean=0.0,
            dark_count_prob=dark_count_prob,
        )
        return expected_heralded_g2(model, n_max) - target_g2

    return float(brentq(objective, 1e-8, 0.4, xtol=1e-14, rtol=1e-13))
