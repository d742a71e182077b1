"""Best-beamspace selection (BBS) and beamspace modulation (BM).

BBS multiplexes on the strongest eigenbeams only. BM hops over beam subsets,
encoding extra bits in the subset index; its achievable rate decomposes as
index entropy plus mean per-subset capacity, maximized by Gibbs-form
activation probabilities p_i = 2^C_i / sum_j 2^C_j.
"""
from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .beamspace import (
    BeamSubset,
    BeamspaceDecomposition,
    combination_capacity,
    enumerate_subsets,
    waterfill,
)
from .errors import ValidationError
from .modulation import bits_per_point, constellation


@dataclass(frozen=True)
class ActivationDistribution:
    """Candidate beam subsets with capacities and activation probabilities."""

    subsets: tuple[BeamSubset, ...]
    capacities: np.ndarray
    probabilities: np.ndarray

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["subset", "capacity_bits", "probability"])
            for s, c, p in zip(self.subsets, self.capacities, self.probabilities):
                w.writerow(["|".join(str(i) for i in s.indices), repr(float(c)), repr(float(p))])


@dataclass(frozen=True)
class SignalSet:
    """Finite transmit alphabet: subset-index bits plus payload constellation.

    ``candidates[i]`` is the transmit vector for bit label i; ``subset_index[i]``
    identifies which beam subset it rides on. The label order is the bijection
    from bit patterns to candidates (index bits first, then per-stream payload
    bits).
    """

    candidates: np.ndarray      # (2**bits_per_symbol, tx_elements)
    subset_index: np.ndarray    # (2**bits_per_symbol,)
    bits_per_symbol: int
    subsets: tuple[BeamSubset, ...]


def index_rate(capacities) -> float:
    """log2 sum_i 2^C_i, computed with the max shifted out for stability."""
    c = np.asarray(capacities, dtype=float)
    m = float(np.max(c))
    return m + float(np.log2(np.sum(np.exp2(c - m))))


def optimal_activation(capacities) -> np.ndarray:
    """Capacity-maximizing subset activation probabilities (Gibbs form)."""
    c = np.asarray(capacities, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise ValidationError("capacities must be a non-empty 1-D vector")
    if not np.all(np.isfinite(c)):
        raise ValidationError("capacities must be finite")
    w = np.exp2(c - np.max(c))
    return w / w.sum()


def _post_combining_count(d: BeamspaceDecomposition, k_t: int, k_r: int) -> int:
    if k_t < 1:
        raise ValidationError(f"transmit chain count must be positive, got {k_t}")
    if not 1 <= k_r <= d.rx_elements:
        raise ValidationError(f"receive chain count {k_r} out of range 1..{d.rx_elements}")
    return min(k_t, k_r, d.n_full)


def bbs_rate(
    d: BeamspaceDecomposition,
    k_t: int,
    k_r: int,
    total_power: float,
    noise_variance: float,
) -> float:
    """Waterfilled capacity of the strongest min(k_t, k_r) eigenbeams."""
    n = _post_combining_count(d, k_t, k_r)
    subset = BeamSubset(indices=tuple(range(n)))
    return combination_capacity(d, subset, total_power, noise_variance)


def bm_rate(
    d: BeamspaceDecomposition,
    k_t: int,
    k_r: int,
    total_power: float,
    noise_variance: float,
    subset_cap: int | None = 1024,
) -> tuple[float, ActivationDistribution]:
    """Achievable BM rate log2 sum_i 2^C_i over enumerated beam subsets.

    Subsets are drawn from the beams surviving the k_r-chain combiner, capped
    at the channel's effective DoF.
    """
    if k_t < 1:
        raise ValidationError(f"transmit chain count must be positive, got {k_t}")
    if not 1 <= k_r <= d.rx_elements:
        raise ValidationError(f"receive chain count {k_r} out of range 1..{d.rx_elements}")
    n_avail = min(d.effective_dof, k_r)
    k = min(k_t, n_avail)
    subsets = enumerate_subsets(d.singular_values[:n_avail], k, cap=subset_cap)
    caps = np.array([combination_capacity(d, s, total_power, noise_variance) for s in subsets])
    probs = optimal_activation(caps)
    dist = ActivationDistribution(subsets=tuple(subsets), capacities=caps, probabilities=probs)
    return index_rate(caps), dist


def build_signal_set(
    d: BeamspaceDecomposition,
    index_bits: int,
    constellation_name: str,
    k_t: int,
    total_power: float,
    subset_cap: int | None = 1024,
) -> SignalSet:
    """Transmit alphabet hopping over the 2**index_bits best beam subsets.

    Each candidate is beamformer(subset) @ payload with the beamformer columns
    being the subset's right singular vectors scaled so the power budget is
    met by the unit-average-power payload.
    """
    if index_bits < 0:
        raise ValidationError(f"index_bits must be non-negative, got {index_bits}")
    if not total_power > 0:
        raise ValidationError(f"total_power must be positive, got {total_power}")
    pts = constellation(constellation_name)
    payload_bits = bits_per_point(constellation_name)
    n_avail = d.effective_dof
    k = min(k_t, n_avail)
    subsets = enumerate_subsets(d.singular_values[:n_avail], k, cap=subset_cap)
    n_subsets_needed = 1 << index_bits
    if n_subsets_needed > len(subsets):
        raise ValidationError(
            f"index_bits={index_bits} needs {n_subsets_needed} subsets but only "
            f"{len(subsets)} are available"
        )
    subsets = subsets[:n_subsets_needed]
    scale = np.sqrt(total_power / k)
    candidates = []
    subset_idx = []
    for i, s in enumerate(subsets):
        beamformer = d.right_vectors[:, list(s.indices)] * scale
        for payload in itertools.product(range(pts.size), repeat=k):
            candidates.append(beamformer @ pts[list(payload)])
            subset_idx.append(i)
    return SignalSet(
        candidates=np.asarray(candidates),
        subset_index=np.asarray(subset_idx),
        bits_per_symbol=index_bits + k * payload_bits,
        subsets=tuple(subsets),
    )
