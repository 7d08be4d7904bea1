"""Photon-counting simulation of the pair-code experiment.

Each codeword is sent on its own for ``duration`` seconds; every APD counts
signal photons plus a flat background (stray light and dark counts). Count
draws are Poisson. The channel is estimated by row-normalizing the counts.

``rate`` is the photon rate entering the decoder. Coupling and detector
efficiencies scale it to a detected rate; they change count totals but not
the shape of the channel.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import optics
from .circuit import helstrom_basis
from .measure import ChannelModel, blahut_arimoto, mutual_information
from .pwcode import rotated_codewords
from .qstate import trine_state

DEFAULT_DURATION = 5.0
# Chosen so the detected signal rate is 1e6 counts/s at the default efficiencies.
DEFAULT_RATE = 1.0e6 / (0.70 * 0.80)
DEFAULT_REPLICAS = 16
LABELS = ("00", "11", "22")


class EstimationError(ValueError):
    def __init__(self, row: int):
        super().__init__(f"no counts recorded for input symbol {LABELS[row] if row < 3 else row}")
        self.row = row


@dataclass(frozen=True)
class NoiseConfig:
    """Imperfections of the optical setup.

    ``background_rate`` is stray light per detector in counts/s. Left as
    ``None``, it is chosen so that stray light plus dark counts in each
    detector equal ``background_fraction`` of the mean off-diagonal signal
    count at zero offset.
    """

    visibility: float = 0.98
    background_rate: Optional[float] = None
    dark_rate: float = 100.0
    detector_efficiency: float = 0.70
    coupling_efficiency: float = 0.80
    pbs_extinction: float = 1.0
    background_fraction: float = 0.02

    def __post_init__(self):
        for name in ("visibility", "detector_efficiency", "coupling_efficiency", "pbs_extinction"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")
        if self.dark_rate < 0 or (self.background_rate is not None and self.background_rate < 0):
            raise ValueError("rates must be non-negative")
        if self.background_fraction < 0:
            raise ValueError("background_fraction must be non-negative")

    @classmethod
    def ideal(cls) -> "NoiseConfig":
        return cls(visibility=1.0, background_rate=0.0, dark_rate=0.0)

    @property
    def efficiency(self) -> float:
        return self.detector_efficiency * self.coupling_efficiency

    def as_dict(self) -> dict:
        return asdict(self)


def signal_distributions(offset: float, noise: NoiseConfig) -> np.ndarray:
    """Per-photon click probabilities, rows = sent codeword, cols = APD0..2, no-count."""
    return np.array([
        optics.detector_distribution(cw, pbs_extinction=noise.pbs_extinction, visibility=noise.visibility)
        for cw in rotated_codewords(offset)
    ])


def _mean_off_diagonal(p: np.ndarray) -> float:
    w = p[:, :3]
    return float((w.sum() - np.trace(w)) / 6)


def background_per_detector(noise: NoiseConfig, rate: float = DEFAULT_RATE) -> float:
    """Stray plus dark counts per second in each APD."""
    if noise.background_rate is not None:
        return noise.background_rate + noise.dark_rate
    signal = rate * noise.efficiency
    target = noise.background_fraction * signal * _mean_off_diagonal(signal_distributions(0.0, noise))
    return max(target, noise.dark_rate)


def expected_rates(offset: float, noise: NoiseConfig, rate: float = DEFAULT_RATE) -> np.ndarray:
    """Mean counts per second, rows = sent codeword, cols = APD0..2."""
    signal = rate * noise.efficiency
    return signal * signal_distributions(offset, noise)[:, :3] + background_per_detector(noise, rate)


def noisy_channel(offset: float, noise: NoiseConfig, rate: float = DEFAULT_RATE) -> ChannelModel:
    """Row-normalized expected counts.

    Equivalent to ``(1 - beta) P + beta/3`` with ``beta`` the background share
    of each row's counts.
    """
    r = expected_rates(offset, noise, rate)
    if np.any(r.sum(axis=1) <= 0):
        raise ValueError("no light reaches the detectors")
    return ChannelModel(r / r.sum(axis=1, keepdims=True), LABELS, LABELS)


@dataclass(frozen=True, eq=False)
class CountRecord:
    counts: np.ndarray
    duration: float
    total_rate: float
    seed: Optional[int]
    offset: float = 0.0
    noise: NoiseConfig = field(default_factory=NoiseConfig)

    def __post_init__(self):
        c = np.array(self.counts, dtype=np.int64)
        if c.min() < 0:
            raise ValueError("counts must be non-negative")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)


def simulate_counts(offset: float, noise: NoiseConfig, duration: float = DEFAULT_DURATION,
                    rate: float = DEFAULT_RATE, seed=0, rows=(0, 1, 2)) -> CountRecord:
    """Poisson counts for the codewords in ``rows``, one after another.

    Rows not sent stay at zero. ``seed`` may be an int or a
    ``numpy.random.SeedSequence``.
    """
    if duration < 0 or rate < 0:
        raise ValueError("duration and rate must be non-negative")
    rng = np.random.default_rng(seed)
    mean = duration * expected_rates(offset, noise, rate) if rate > 0 else np.zeros((3, 3))
    mean = mean * np.isin(np.arange(3), rows)[:, None]
    counts = rng.poisson(mean)
    return CountRecord(counts, duration, rate, seed if isinstance(seed, (int, np.integer)) else None, offset, noise)


@dataclass(frozen=True, eq=False)
class ChannelEstimate:
    channel: ChannelModel
    stderr: np.ndarray

    def mutual_information(self) -> float:
        n = self.channel.shape[0]
        return mutual_information(np.full(n, 1.0 / n), self.channel)


def estimate_channel(counts) -> ChannelEstimate:
    """Row-normalize counts; standard errors follow from Poisson counting.

    For independent Poisson counts the normalized entry ``n_y/N`` has
    variance ``p(1-p)/N``.
    """
    c = np.asarray(getattr(counts, "counts", counts), dtype=float)
    totals = c.sum(axis=1)
    for row, total in enumerate(totals):
        if total <= 0:
            raise EstimationError(row)
    p = c / totals[:, None]
    se = np.sqrt(p * (1 - p) / totals[:, None])
    return ChannelEstimate(ChannelModel(p, LABELS[: c.shape[0]], LABELS[: c.shape[1]]), se)


@dataclass(frozen=True)
class SweepPoint:
    offset: float
    mi: float
    stderr: float


def run_sweep_experiment(offsets: Sequence[float], noise: NoiseConfig, duration: float = DEFAULT_DURATION,
                         rate: float = DEFAULT_RATE, seed: int = 0, replicas: int = DEFAULT_REPLICAS) -> list:
    """Simulated mutual information against codeword rotation.

    Each offset gets ``replicas`` independent count records; the point is their
    mean and the standard error of that mean. Streams are split from ``seed``
    per offset and per replica, so results do not depend on evaluation order.
    """
    if replicas < 2:
        raise ValueError("need at least two replicas for an error estimate")
    streams = np.random.SeedSequence(seed).spawn(len(offsets))
    out = []
    for offset, stream in zip(offsets, streams):
        values = [
            estimate_channel(simulate_counts(offset, noise, duration, rate, child)).mutual_information()
            for child in stream.spawn(replicas)
        ]
        out.append(SweepPoint(float(offset), float(np.mean(values)), float(np.std(values, ddof=1) / np.sqrt(replicas))))
    return out


# -- separable (per-letter) decoding ------------------------------------------------


def separable_letter_rates(noise: NoiseConfig, rate: float = DEFAULT_RATE, path_letter: bool = False) -> np.ndarray:
    """Mean counts per second for one letter read with its Helstrom basis.

    The polarization letter is measured inside each arm, so visibility does
    not enter. Reading the path letter recombines the arms, which scales the
    A/B coherence by the visibility. Background per detector is the same as in
    the collective run.
    """
    a, b = trine_state(0), trine_state(1)
    basis = helstrom_basis(a, b)
    v = noise.visibility if path_letter else 1.0
    rows = []
    for s in (a, b):
        rho = s.projector()
        rho = rho * np.array([[1.0, v], [v, 1.0]])
        rows.append(basis.probabilities(rho))
    signal = rate * noise.efficiency
    return signal * np.array(rows) + background_per_detector(noise, rate)


def separable_c1(noise: NoiseConfig, rate: float = DEFAULT_RATE) -> float:
    """Expected single-letter capacity under separable decoding, averaged over
    the polarization and path letters."""
    vals = []
    for path_letter in (False, True):
        r = separable_letter_rates(noise, rate, path_letter)
        vals.append(blahut_arimoto(r / r.sum(axis=1, keepdims=True))[0])
    return float(np.mean(vals))


def simulate_separable_c1(noise: NoiseConfig, duration: float = DEFAULT_DURATION, rate: float = DEFAULT_RATE,
                          seed: int = 0) -> float:
    """Counted version of :func:`separable_c1`."""
    streams = np.random.SeedSequence(seed).spawn(2)
    vals = []
    for path_letter, stream in zip((False, True), streams):
        rng = np.random.default_rng(stream)
        counts = rng.poisson(duration * separable_letter_rates(noise, rate, path_letter))
        est = estimate_channel(counts)
        vals.append(blahut_arimoto(est.channel)[0])
    return float(np.mean(vals))
