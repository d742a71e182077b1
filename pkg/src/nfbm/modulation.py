"""Gray-labeled, unit-average-power constellations."""
from __future__ import annotations

import numpy as np

from .errors import ValidationError

CONSTELLATION_NAMES = ("bpsk", "qpsk", "16qam", "64qam")


def _gray_pam(bits: int) -> np.ndarray:
    """PAM amplitudes indexed by Gray label so adjacent levels differ in one bit."""
    m = 1 << bits
    amp = np.zeros(m)
    for pos in range(m):
        label = pos ^ (pos >> 1)
        amp[label] = 2 * pos - (m - 1)
    return amp


def constellation(name: str) -> np.ndarray:
    """Complex points indexed by bit label, normalized to unit average power."""
    key = name.lower()
    if key == "bpsk":
        pts = np.array([1.0 + 0j, -1.0 + 0j])
    elif key in ("qpsk", "16qam", "64qam"):
        bits = {"qpsk": 2, "16qam": 4, "64qam": 6}[key]
        half = bits // 2
        pam = _gray_pam(half)
        m = 1 << bits
        pts = np.empty(m, dtype=complex)
        for label in range(m):
            i_label = label >> half
            q_label = label & ((1 << half) - 1)
            pts[label] = pam[i_label] + 1j * pam[q_label]
    else:
        raise ValidationError(f"unknown constellation {name!r} (choose from {CONSTELLATION_NAMES})")
    return pts / np.sqrt(np.mean(np.abs(pts) ** 2))


def bits_per_point(name: str) -> int:
    return {"bpsk": 1, "qpsk": 2, "16qam": 4, "64qam": 6}[name.lower()]
