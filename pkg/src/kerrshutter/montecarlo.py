"""Monte Carlo simulation of the heralded pair source, Kerr switch, and
click detection in a Hanbury Brown-Twiss arrangement.

Per pulse the sampling chain is:

1. pair number n from the pair statistics (two-mode squeezed vacuum has a
   thermal marginal, P(n) = mu^n / (1+mu)^(n+1); poissonian is Poisson(mu));
2. idler click with probability 1 - (1 - eta_i)^n, OR-ed with a dark count;
3. signal photons thinned to the analyzed port: Binomial(n, eta_s), where
   eta_s bundles coupling, switch efficiency and detection;
   for the anti port, each photon NOT transmitted leaks through the crossed
   analyzer with probability epsilon instead;
4. noise photons added from the noise statistics (Poisson(nu), or
   multimode thermal with `noise_modes` modes, so g2 = 1 + 1/modes);
5. the port photons split 50:50 binomially onto two non-number-resolving
   click detectors, each OR-ed with an independent dark count.

Determinism contract: identical (model, n_pulses, seed, port) give identical
tallies.  Pulses are processed in fixed chunks of CHUNK_SIZE; chunk i uses
numpy SeedSequence(entropy=seed, spawn_key=(i,)), so partitions of the pulse
budget along chunk boundaries can run on independent workers and merge to
the exact single-worker result (see chunk_seed / merge_counts).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass

import numpy as np

CHUNK_SIZE = 1_000_000

PAIR_STATISTICS = ("two_mode_squeezed", "poissonian")
NOISE_STATISTICS = ("poissonian", "thermal")
PORTS = ("switched", "anti")


@dataclass(frozen=True)
class SourceModel:
    """Heralded-source and detection parameters for one Monte Carlo run.

    signal_transmission is the total probability that a generated signal
    photon appears at the analyzed (switched) port, switch efficiency
    included.  analyzer_extinction is the probability that an unswitched
    photon leaks through the crossed analyzer.
    """

    mean_pairs: float
    pair_statistics: str = "two_mode_squeezed"
    idler_efficiency: float = 1.0
    signal_transmission: float = 1.0
    noise_mean: float = 0.0
    noise_statistics: str = "poissonian"
    noise_modes: int = 15
    dark_count_prob: float = 0.0
    analyzer_extinction: float = 0.01

    def __post_init__(self):
        if self.mean_pairs < 0:
            raise ValueError("mean pair number must be non-negative")
        if self.pair_statistics not in PAIR_STATISTICS:
            raise ValueError(f"unknown pair statistics {self.pair_statistics!r}")
        if self.noise_statistics not in NOISE_STATISTICS:
            raise ValueError(f"unknown noise statistics {self.noise_statistics!r}")
        if self.noise_mean < 0:
            raise ValueError("noise mean must be non-negative")
        if self.noise_modes < 1:
            raise ValueError("thermal noise needs at least one mode")
        for name in ("idler_efficiency", "signal_transmission", "dark_count_prob", "analyzer_extinction"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


def model_hash(model: SourceModel) -> str:
    """Stable short hash of the model parameters, for run records."""
    payload = json.dumps(asdict(model), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class CountsSummary:
    """Accumulated click and coincidence tallies from a Monte Carlo run."""

    n_pulses: int = 0
    idler_clicks: int = 0
    signal1_clicks: int = 0
    signal2_clicks: int = 0
    two_fold_1i: int = 0
    two_fold_2i: int = 0
    three_fold_12i: int = 0

    def __post_init__(self):
        self.check()

    def check(self):
        counts = (
            self.idler_clicks,
            self.signal1_clicks,
            self.signal2_clicks,
            self.two_fold_1i,
            self.two_fold_2i,
            self.three_fold_12i,
        )
        if any(c < 0 for c in counts) or self.n_pulses < 0:
            raise ValueError("counts must be non-negative")
        if any(c > self.n_pulses for c in counts):
            raise ValueError("no tally can exceed the number of pulses")
        if self.three_fold_12i > min(self.two_fold_1i, self.two_fold_2i):
            raise ValueError("three-fold coincidences cannot exceed either two-fold tally")

    def __add__(self, other: "CountsSummary") -> "CountsSummary":
        return CountsSummary(
            n_pulses=self.n_pulses + other.n_pulses,
            idler_clicks=self.idler_clicks + other.idler_clicks,
            signal1_clicks=self.signal1_clicks + other.signal1_clicks,
            signal2_clicks=self.signal2_clicks + other.signal2_clicks,
            two_fold_1i=self.two_fold_1i + other.two_fold_1i,
            two_fold_2i=self.two_fold_2i + other.two_fold_2i,
            three_fold_12i=self.three_fold_12i + other.three_fold_12i,
        )


def merge_counts(parts) -> CountsSummary:
    """Sum tallies from independently simulated partitions."""
    total = CountsSummary()
    for part in parts:
        total = total + part
    return total


def chunk_seed(seed, chunk_index: int) -> np.random.SeedSequence:
    """Sub-seed for chunk `chunk_index` of a run seeded with `seed`.

    `seed` is an integer or a SeedSequence; the chunk index is appended to
    the spawn key, so partitions and grid points derive non-overlapping
    streams from one root seed.
    """
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(
            entropy=seed.entropy, spawn_key=tuple(seed.spawn_key) + (chunk_index,)
        )
    return np.random.SeedSequence(entropy=seed, spawn_key=(chunk_index,))


def _draw_pairs(rng, model: SourceModel, size: int) -> np.ndarray:
    mu = model.mean_pairs
    if mu == 0.0:
        return np.zeros(size, dtype=np.int64)
    if model.pair_statistics == "two_mode_squeezed":
        # thermal marginal: geometric on {1, 2, ...} shifted down
        return rng.geometric(1.0 / (1.0 + mu), size=size) - 1
    return rng.poisson(mu, size=size)


def _draw_noise(rng, model: SourceModel, size: int) -> np.ndarray:
    nu = model.noise_mean
    if nu == 0.0:
        return np.zeros(size, dtype=np.int64)
    if model.noise_statistics == "poissonian":
        return rng.poisson(nu, size=size)
    m = model.noise_modes
    return rng.negative_binomial(m, m / (m + nu), size=size)


def _simulate_chunk(model: SourceModel, size: int, seed_seq, port: str) -> CountsSummary:
    rng = np.random.default_rng(seed_seq)
    dark = model.dark_count_prob

    n = _draw_pairs(rng, model, size)
    herald = rng.random(size) < 1.0 - (1.0 - model.idler_efficiency) ** n
    if dark > 0:
        herald |= rng.random(size) < dark

    transmitted = rng.binomial(n, model.signal_transmission)
    if port == "switched":
        photons = transmitted
    else:
        photons = rng.binomial(n - transmitted, model.analyzer_extinction)
    photons = photons + _draw_noise(rng, model, size)

    at_d1 = rng.binomial(photons, 0.5)
    at_d2 = photons - at_d1
    click1 = at_d1 > 0
    click2 = at_d2 > 0
    if dark > 0:
        click1 |= rng.random(size) < dark
        click2 |= rng.random(size) < dark

    return CountsSummary(
        n_pulses=size,
        idler_clicks=int(herald.sum()),
        signal1_clicks=int(click1.sum()),
        signal2_clicks=int(click2.sum()),
        two_fold_1i=int((herald & click1).sum()),
        two_fold_2i=int((herald & click2).sum()),
        three_fold_12i=int((herald & click1 & click2).sum()),
    )


def simulate_pulses(
    model: SourceModel,
    n_pulses: int,
    seed,
    port: str = "switched",
    chunk_size: int = CHUNK_SIZE,
    first_chunk: int = 0,
) -> CountsSummary:
    """Run the per-pulse sampling chain for n_pulses pulses.

    `seed` is an integer or a numpy SeedSequence.  Deterministic in
    (model, n_pulses, seed, port) for a fixed chunk_size.

    Workers may split the pulse budget along chunk boundaries: a partition
    starting at chunk index k passes first_chunk=k, and the merged tallies
    (merge_counts) equal the single-call result exactly.
    """
    if n_pulses < 1:
        raise ValueError("need at least one pulse")
    if port not in PORTS:
        raise ValueError(f"unknown port {port!r}, expected one of {PORTS}")

    parts = []
    index = first_chunk
    remaining = n_pulses
    while remaining > 0:
        size = min(chunk_size, remaining)
        parts.append(_simulate_chunk(model, size, chunk_seed(seed, index), port))
        remaining -= size
        index += 1
    return merge_counts(parts)


def flat_record(
    counts: CountsSummary,
    seed: int | None = None,
    model: SourceModel | None = None,
    estimates: dict | None = None,
) -> dict:
    """Serialize a run as a flat record: tallies, derived estimates, seed, model hash."""
    record = {
        "n_pulses": counts.n_pulses,
        "idler_clicks": counts.idler_clicks,
        "signal1_clicks": counts.signal1_clicks,
        "signal2_clicks": counts.signal2_clicks,
        "two_fold_1i": counts.two_fold_1i,
        "two_fold_2i": counts.two_fold_2i,
        "three_fold_12i": counts.three_fold_12i,
    }
    if estimates:
        record.update(estimates)
    if seed is not None:
        record["seed"] = seed
    if model is not None:
        record["model_hash"] = model_hash(model)
    return record
