"""Monte Carlo sampler tests: determinism, partitioning, trivial limits,
tally invariants, and distribution checks against the analytic pmfs.
"""

import numpy as np
import pytest

from kerrshutter import (
    CountsSummary,
    SourceModel,
    chunk_seed,
    flat_record,
    merge_counts,
    model_hash,
    simulate_pulses,
)
from kerrshutter.expectations import pair_pmf


IDEAL = SourceModel(mean_pairs=0.05, idler_efficiency=1.0, signal_transmission=1.0)


def test_identical_seed_identical_counts():
    a = simulate_pulses(IDEAL, 300_000, seed=7)
    b = simulate_pulses(IDEAL, 300_000, seed=7)
    assert a == b


def test_different_seed_differs():
    a = simulate_pulses(IDEAL, 300_000, seed=7)
    b = simulate_pulses(IDEAL, 300_000, seed=8)
    assert a != b


def test_partition_merge_equals_single_run():
    """Workers splitting the budget along chunk boundaries reproduce one run."""
    n = 2_500_000  # 2.5 chunks at the default chunk size
    full = simulate_pulses(IDEAL, n, seed=11)
    parts = [
        simulate_pulses(IDEAL, 1_000_000, seed=11, first_chunk=0),
        simulate_pulses(IDEAL, 1_000_000, seed=11, first_chunk=1),
        simulate_pulses(IDEAL, 500_000, seed=11, first_chunk=2),
    ]
    assert merge_counts(parts) == full


def test_seed_sequence_accepted():
    seq = chunk_seed(11, 4)
    a = simulate_pulses(IDEAL, 50_000, seed=seq)
    b = simulate_pulses(IDEAL, 50_000, seed=chunk_seed(11, 4))
    assert a == b
    assert a != simulate_pulses(IDEAL, 50_000, seed=chunk_seed(11, 5))


def test_all_zero_when_source_dark():
    model = SourceModel(mean_pairs=0.0, noise_mean=0.0, dark_count_prob=0.0)
    counts = simulate_pulses(model, 100_000, seed=3)
    assert counts.idler_clicks == 0
    assert counts.signal1_clicks == 0
    assert counts.signal2_clicks == 0
    assert counts.three_fold_12i == 0


def test_single_photon_cannot_split():
    # near-zero mu: pulses carry at most one pair, so no three-folds ever
    model = SourceModel(mean_pairs=1e-6)
    counts = simulate_pulses(model, 2_000_000, seed=5)
    assert counts.two_fold_1i + counts.two_fold_2i > 0
    assert counts.three_fold_12i == 0


def test_tally_invariants_hold():
    model = SourceModel(
        mean_pairs=0.2,
        idler_efficiency=0.8,
        signal_transmission=0.6,
        noise_mean=0.05,
        dark_count_prob=1e-4,
    )
    counts = simulate_pulses(model, 500_000, seed=13)
    assert counts.three_fold_12i <= min(counts.two_fold_1i, counts.two_fold_2i)
    assert counts.two_fold_1i <= min(counts.idler_clicks, counts.signal1_clicks)
    assert counts.two_fold_2i <= min(counts.idler_clicks, counts.signal2_clicks)
    assert max(counts.idler_clicks, counts.signal1_clicks) <= counts.n_pulses


@pytest.mark.parametrize("statistics", ["two_mode_squeezed", "poissonian"])
def test_pair_statistics_match_pmf(statistics):
    """Herald rate equals the analytic P(n >= 1) for ideal idler detection."""
    mu = 0.08
    model = SourceModel(mean_pairs=mu, pair_statistics=statistics)
    n = 1_000_000
    counts = simulate_pulses(model, n, seed=21)
    p_click = 1.0 - pair_pmf(mu, statistics)[0]
    observed = counts.idler_clicks / n
    sigma = np.sqrt(p_click * (1 - p_click) / n)
    assert abs(observed - p_click) < 4 * sigma


def test_noise_only_clicks():
    model = SourceModel(mean_pairs=0.0, noise_mean=0.02, dark_count_prob=1e-3)
    n = 500_000
    counts = simulate_pulses(model, n, seed=17)
    # port clicks driven by noise; heralds only by darks
    p1 = 1.0 - np.exp(-0.01) * (1 - 1e-3)  # Poisson thinning onto one detector
    sigma = np.sqrt(p1 * (1 - p1) / n)
    assert abs(counts.signal1_clicks / n - p1) < 4 * sigma
    p_dark = 1e-3
    assert abs(counts.idler_clicks / n - p_dark) < 4 * np.sqrt(p_dark / n)


def test_anti_port_scales_with_extinction():
    base = dict(mean_pairs=0.05, idler_efficiency=1.0, signal_transmission=0.5)
    n = 400_000
    leak1 = simulate_pulses(SourceModel(**base, analyzer_extinction=0.01), n, 19, port="anti")
    leak5 = simulate_pulses(SourceModel(**base, analyzer_extinction=0.05), n, 19, port="anti")
    assert leak1.signal1_clicks + leak1.signal2_clicks > 0
    ratio = (leak5.signal1_clicks + leak5.signal2_clicks) / max(
        leak1.signal1_clicks + leak1.signal2_clicks, 1
    )
    assert ratio == pytest.approx(5.0, rel=0.35)


def test_anti_port_zero_extinction_dark():
    model = SourceModel(mean_pairs=0.05, analyzer_extinction=0.0)
    counts = simulate_pulses(model, 200_000, seed=23, port="anti")
    assert counts.signal1_clicks == 0 and counts.signal2_clicks == 0


def test_validation_errors():
    with pytest.raises(ValueError):
        SourceModel(mean_pairs=-0.1)
    with pytest.raises(ValueError):
        SourceModel(mean_pairs=0.1, idler_efficiency=1.2)
    with pytest.raises(ValueError):
        SourceModel(mean_pairs=0.1, pair_statistics="binomial")
    with pytest.raises(ValueError):
        SourceModel(mean_pairs=0.1, noise_statistics="flat")
    with pytest.raises(ValueError):
        SourceModel(mean_pairs=0.1, noise_modes=0)
    with pytest.raises(ValueError):
        simulate_pulses(IDEAL, 0, seed=1)
    with pytest.raises(ValueError):
        simulate_pulses(IDEAL, 100, seed=1, port="sideways")


def test_counts_summary_invariant_checks():
    with pytest.raises(ValueError):
        CountsSummary(n_pulses=10, two_fold_1i=2, two_fold_2i=2, three_fold_12i=3)
    with pytest.raises(ValueError):
        CountsSummary(n_pulses=10, idler_clicks=11)
    with pytest.raises(ValueError):
        CountsSummary(n_pulses=10, idler_clicks=-1)


def test_flat_record_contents():
    counts = simulate_pulses(IDEAL, 100_000, seed=29)
    record = flat_record(counts, seed=29, model=IDEAL, estimates={"g2": 0.1, "g2_err": 0.01})
    assert record["n_pulses"] == 100_000
    assert record["seed"] == 29
    assert record["model_hash"] == model_hash(IDEAL)
    assert set(record) == {
        "n_pulses",
        "idler_clicks",
        "signal1_clicks",
        "signal2_clicks",
        "two_fold_1i",
        "two_fold_2i",
        "three_fold_12i",
        "g2",
        "g2_err",
        "seed",
        "model_hash",
    }


def test_model_hash_stable_and_sensitive():
    assert model_hash(IDEAL) == model_hash(SourceModel(mean_pairs=0.05))
    assert model_hash(IDEAL) != model_hash(SourceModel(mean_pairs=0.06))
