"""Eigenbeam machinery: SVD, waterfilling, subset enumeration, combining."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .dof import effective_dof
from .errors import DegenerateChannelError, ValidationError
from .channel import ChannelMatrix

# Largest C(N, K) that may be enumerated without an explicit cap.
SUBSET_SAFETY_BOUND = 1 << 20


@dataclass(frozen=True)
class BeamspaceDecomposition:
    """SVD of a channel with a deterministic phase convention.

    ``left_vectors`` is (rx, N_full), ``right_vectors`` (tx, N_full) with
    N_full = min(rx, tx). ``left_complement`` holds the remaining orthonormal
    receive-side directions, needed when combining with more chains than
    N_full. The phase of each beam pair is fixed by making the
    largest-magnitude entry of the right singular vector real positive.
    """

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray
    effective_dof: int
    left_complement: np.ndarray

    @property
    def rx_elements(self) -> int:
        return self.left_vectors.shape[0]

    @property
    def tx_elements(self) -> int:
        return self.right_vectors.shape[0]

    @property
    def n_full(self) -> int:
        return self.singular_values.size


@dataclass(frozen=True)
class BeamSubset:
    """Strictly increasing beam indices into a decomposition's singular values."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = self.indices
        if len(idx) == 0:
            raise ValidationError("beam subset must be non-empty")
        if any(i < 0 for i in idx) or any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValidationError(f"beam indices must be strictly increasing and non-negative: {idx}")


def decompose(h: ChannelMatrix, threshold_fraction: float = 0.01) -> BeamspaceDecomposition:
    """Full SVD of the channel with phase-fixed beams and an effective-DoF count."""
    entries = np.asarray(h.entries)
    u, s, vh = np.linalg.svd(entries, full_matrices=True)
    n_full = s.size
    v = vh.conj().T[:, :n_full]
    u_main = u[:, :n_full].copy()
    v = v.copy()
    for k in range(n_full):
        i = int(np.argmax(np.abs(v[:, k])))
        mag = np.abs(v[i, k])
        if mag > 0:
            phase = v[i, k] / mag
            v[:, k] *= np.conj(phase)
            u_main[:, k] *= np.conj(phase)
    if s[0] <= 0:
        raise DegenerateChannelError("channel matrix is identically zero")
    eff = effective_dof(s, threshold_fraction)
    return BeamspaceDecomposition(
        left_vectors=u_main,
        singular_values=s,
        right_vectors=v,
        effective_dof=eff,
        left_complement=u[:, n_full:],
    )


def waterfill(gains, total_power: float, noise_variance: float) -> np.ndarray:
    """Capacity-optimal power split over parallel channels with gains sigma_k^2.

    Returns q with sum(q) = total_power maximizing sum log2(1 + q*g/noise);
    the KKT water level mu satisfies q_k = max(0, mu - noise/g_k).
    """
    g = np.asarray(gains, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise ValidationError("gains must be a non-empty 1-D vector")
    if np.any(g < 0):
        raise ValidationError("gains must be non-negative")
    if not total_power > 0:
        raise ValidationError(f"total_power must be positive, got {total_power}")
    if not noise_variance > 0:
        raise ValidationError(f"noise_variance must be positive, got {noise_variance}")
    if not np.any(g > 0):
        raise DegenerateChannelError("all gains are zero")

    with np.errstate(divide="ignore", over="ignore"):
        floor = np.where(g > 0, noise_variance / np.where(g > 0, g, 1.0), np.inf)
    order = np.argsort(floor)
    sorted_floor = floor[order]
    q = np.zeros_like(g)
    # Grow the active set while the water level stays above the next floor.
    mu = 0.0
    n_active = 0
    for k in range(g.size):
        if not np.isfinite(sorted_floor[k]):
            break
        candidate = (total_power + sorted_floor[: k + 1].sum()) / (k + 1)
        if candidate > sorted_floor[k]:
            mu = candidate
            n_active = k + 1
    if n_active == 0:
        # Floors so large that power + floor rounds to floor; give everything
        # to the strongest channel, which is the correct limit.
        q[order[0]] = total_power
        return q
    active = order[:n_active]
    q[active] = mu - floor[active]
    return q


def combination_capacity(
    d: BeamspaceDecomposition,
    s: BeamSubset,
    total_power: float,
    noise_variance: float,
) -> float:
    """Waterfilled capacity of one beam subset using the full power budget."""
    idx = np.asarray(s.indices)
    if idx.max() >= d.n_full:
        raise ValidationError(f"beam index {idx.max()} out of range for {d.n_full} beams")
    gains = d.singular_values[idx] ** 2
    if not np.any(gains > 0):
        return 0.0
    q = waterfill(gains, total_power, noise_variance)
    return float(np.sum(np.log2(1.0 + q * gains / noise_variance)))


def enumerate_subsets(singular_values, k: int, cap: int | None = 1024) -> list[BeamSubset]:
    """Size-k beam subsets in decreasing order of summed squared singular value.

    Ties break lexicographically on the index list. At most ``cap`` subsets are
    produced (best-first search, so the top-k subset always comes first).
    Passing cap=None requires C(N, k) within the internal safety bound.
    """
    sigma = np.asarray(singular_values, dtype=float)
    n = sigma.size
    if k < 1:
        raise ValidationError(f"subset size must be positive, got {k}")
    if k > n:
        raise ValidationError(f"subset size {k} exceeds available beam count {n}")
    if np.any(np.diff(sigma) > 1e-12):
        raise ValidationError("singular values must be sorted non-increasing")
    total = math.comb(n, k)
    if cap is None:
        if total > SUBSET_SAFETY_BOUND:
            raise ValidationError(
                f"C({n},{k}) = {total} exceeds the safety bound {SUBSET_SAFETY_BOUND}; "
                "pass an explicit cap"
            )
        limit = total
    else:
        if cap < 1:
            raise ValidationError(f"cap must be positive, got {cap}")
        limit = min(cap, total)

    w = sigma**2
    start = tuple(range(k))
    heap = [(-float(w[list(start)].sum()), start)]
    seen = {start}
    out: list[BeamSubset] = []
    while heap and len(out) < limit:
        _, idx = heapq.heappop(heap)
        out.append(BeamSubset(indices=idx))
        for j in range(k):
            bound = idx[j + 1] if j + 1 < k else n
            nxt = idx[j] + 1
            if nxt < bound:
                succ = idx[:j] + (nxt,) + idx[j + 1:]
                if succ not in seen:
                    seen.add(succ)
                    heapq.heappush(heap, (-float(w[list(succ)].sum()), succ))
    return out


def receive_combiner(d: BeamspaceDecomposition, k_r: int) -> np.ndarray:
    """(rx, k_r) orthonormal combiner built from the leading left singular vectors."""
    if not 1 <= k_r <= d.rx_elements:
        raise ValidationError(f"receive chain count {k_r} out of range 1..{d.rx_elements}")
    if k_r <= d.n_full:
        return d.left_vectors[:, :k_r]
    extra = d.left_complement[:, : k_r - d.n_full]
    return np.concatenate([d.left_vectors, extra], axis=1)
