"""Monte Carlo symbol-error-rate estimation with ML detection.

Randomness is derived per fixed-size trial block from the master seed, so the
error count is independent of execution order and of how the trial budget is
partitioned across shards (partial blocks regenerate the full block and slice).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .beamspace import decompose, receive_combiner
from .channel import ChannelMatrix
from .errors import ValidationError
from .schemes import SignalSet, bbs_rate, bm_rate

TRIAL_BLOCK = 8192


@dataclass(frozen=True)
class SimResult:
    """A single Monte Carlo estimate with provenance."""

    estimate: float
    trials: int
    errors: int
    confidence_interval_95: tuple[float, float]
    seed: int
    config_digest: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "estimate": self.estimate,
                "trials": self.trials,
                "errors": self.errors,
                "confidence_interval_95": list(self.confidence_interval_95),
                "seed": self.seed,
                "config_digest": self.config_digest,
            },
            sort_keys=True,
        )


def wilson_interval(errors: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    n = trials
    p = errors / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = z * np.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def normal_interval(errors: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    p = errors / trials
    half = z * np.sqrt(p * (1 - p) / trials)
    return (max(0.0, p - half), min(1.0, p + half))


def binomial_interval(errors: int, trials: int) -> tuple[float, float]:
    """Wilson for rare-event counts, normal approximation otherwise."""
    if errors < 30:
        return wilson_interval(errors, trials)
    return normal_interval(errors, trials)


def ml_detect(y: np.ndarray, effective_candidates) -> int:
    """Index of the candidate minimizing squared Euclidean distance to y.

    Ties resolve to the lowest index.
    """
    cands = np.asarray(effective_candidates)
    y = np.asarray(y)
    if cands.ndim != 2 or cands.shape[0] == 0:
        raise ValidationError("candidate list must be a non-empty 2-D array")
    if cands.shape[1] != y.shape[0]:
        raise ValidationError(
            f"dimension mismatch: observation has {y.shape[0]} entries, candidates {cands.shape[1]}"
        )
    d2 = np.sum(np.abs(y[None, :] - cands) ** 2, axis=1)
    return int(np.argmin(d2))


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(block,)))


def _config_digest(channel: ChannelMatrix, signal_set: SignalSet, k_r: int,
                   noise_variance: float, trials: int, seed: int) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(channel.entries).tobytes())
    h.update(np.ascontiguousarray(signal_set.candidates).tobytes())
    h.update(json.dumps(
        {
            "k_r": k_r,
            "noise_variance": noise_variance,
            "trials": trials,
            "seed": seed,
            "distance": channel.distance,
            "wavelength": channel.wavelength,
            "r_cal": channel.r_cal,
            "bits_per_symbol": signal_set.bits_per_symbol,
        },
        sort_keys=True,
    ).encode())
    return h.hexdigest()[:16]


def count_symbol_errors(
    channel: ChannelMatrix,
    signal_set: SignalSet,
    k_r: int,
    noise_variance: float,
    trials: int,
    seed: int,
    start_trial: int = 0,
) -> int:
    """Symbol errors over global trials [start_trial, start_trial + trials).

    Deterministic in (seed, global trial index); arbitrary shard boundaries
    merge to the same totals.
    """
    if trials < 1:
        raise ValidationError(f"trials must be positive, got {trials}")
    if noise_variance < 0:
        raise ValidationError(f"noise_variance must be non-negative, got {noise_variance}")
    d = decompose(channel)
    w = receive_combiner(d, k_r)
    # effective candidates after combining, one row per label
    eff = (w.conj().T @ channel.entries @ signal_set.candidates.T).T
    ncand = eff.shape[0]
    cand_energy = np.sum(np.abs(eff) ** 2, axis=1)
    sigma = np.sqrt(noise_variance / 2.0)

    errors = 0
    end = start_trial + trials
    first_block = start_trial // TRIAL_BLOCK
    last_block = (end - 1) // TRIAL_BLOCK
    for block in range(first_block, last_block + 1):
        rng = _block_rng(seed, block)
        labels = rng.integers(0, ncand, size=TRIAL_BLOCK)
        noise = sigma * (
            rng.standard_normal((TRIAL_BLOCK, k_r)) + 1j * rng.standard_normal((TRIAL_BLOCK, k_r))
        )
        lo = max(start_trial, block * TRIAL_BLOCK) - block * TRIAL_BLOCK
        hi = min(end, (block + 1) * TRIAL_BLOCK) - block * TRIAL_BLOCK
        labels = labels[lo:hi]
        y = eff[labels] + noise[lo:hi]
        # argmin_j ||y - e_j||^2 == argmin_j (||e_j||^2 - 2 Re<y, e_j>)
        scores = cand_energy[None, :] - 2.0 * np.real(y @ eff.conj().T)
        detected = np.argmin(scores, axis=1)
        errors += int(np.count_nonzero(detected != labels))
    return errors


def run_ser(
    channel: ChannelMatrix,
    signal_set: SignalSet,
    k_r: int,
    noise_variance: float,
    trials: int,
    seed: int,
) -> SimResult:
    """Monte Carlo SER with ML detection on the combined observation."""
    errors = count_symbol_errors(channel, signal_set, k_r, noise_variance, trials, seed)
    return SimResult(
        estimate=errors / trials,
        trials=trials,
        errors=errors,
        confidence_interval_95=binomial_interval(errors, trials),
        seed=seed,
        config_digest=_config_digest(channel, signal_set, k_r, noise_variance, trials, seed),
    )


def estimate_se_gap(
    channel: ChannelMatrix,
    k_t: int,
    k_r: int,
    snr: float,
    subset_cap: int | None = 1024,
    threshold_fraction: float = 0.01,
) -> tuple[float, float, float]:
    """(bbs_se, bm_se, gain_fraction) at linear SNR = total_power / noise."""
    if not snr > 0:
        raise ValidationError(f"snr must be positive, got {snr}")
    d = decompose(channel, threshold_fraction)
    bbs = bbs_rate(d, k_t, k_r, total_power=snr, noise_variance=1.0)
    bm, _ = bm_rate(d, k_t, k_r, total_power=snr, noise_variance=1.0, subset_cap=subset_cap)
    return bbs, bm, (bm - bbs) / bbs
