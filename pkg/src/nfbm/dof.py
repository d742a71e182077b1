"""Spatial degrees-of-freedom: analytic law, threshold distance, numeric count.

The analytic law and its inverse form a closed pair:

    dof(r) = 1 + (2*L_T/lambda) / sqrt(1 + 4*(r/L_R)^2)
    r(xi)  = (L_R/2) * sqrt((2*L_T/((xi-1)*lambda))^2 - 1)

The numeric counterpart counts singular values above a relative cut; the two
are reported side by side and never conflated.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DegenerateChannelError, DomainError, ValidationError


def analytic_dof(r: float, wavelength: float, aperture_tx: float, aperture_rx: float) -> float:
    """Closed-form spatial DoF of two parallel linear apertures at distance r."""
    if not r > 0:
        raise ValidationError(f"distance must be positive, got {r}")
    if not wavelength > 0:
        raise ValidationError(f"wavelength must be positive, got {wavelength}")
    if aperture_tx < 0:
        raise ValidationError(f"transmit aperture must be non-negative, got {aperture_tx}")
    if not aperture_rx > 0:
        raise ValidationError(f"receive aperture must be positive, got {aperture_rx}")
    return 1.0 + (2.0 * aperture_tx / wavelength) / np.sqrt(1.0 + 4.0 * (r / aperture_rx) ** 2)


def threshold_distance(xi: float, wavelength: float, aperture_tx: float, aperture_rx: float) -> float:
    """Distance at which the analytic DoF crosses the threshold ``xi``."""
    if not wavelength > 0:
        raise ValidationError(f"wavelength must be positive, got {wavelength}")
    xi_max = 1.0 + 2.0 * aperture_tx / wavelength
    if not 1.0 < xi <= xi_max:
        raise DomainError(
            f"DoF threshold {xi} outside the feasible interval (1, {xi_max}] "
            f"for apertures L_T={aperture_tx} m, L_R={aperture_rx} m"
        )
    arg = (2.0 * aperture_tx / ((xi - 1.0) * wavelength)) ** 2 - 1.0
    # xi == xi_max makes arg exactly 0 up to rounding
    return (aperture_rx / 2.0) * np.sqrt(max(arg, 0.0))


def effective_dof(singular_values, threshold_fraction: float = 0.01) -> int:
    """Count singular values at or above ``threshold_fraction`` of the largest."""
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0:
        raise ValidationError("singular value vector is empty")
    if np.any(np.diff(s) > 0):
        raise ValidationError("singular values must be sorted non-increasing")
    if not 0.0 < threshold_fraction <= 1.0:
        raise ValidationError(f"threshold_fraction must be in (0, 1], got {threshold_fraction}")
    if s[0] <= 0.0:
        raise DegenerateChannelError("all singular values are zero")
    return int(np.count_nonzero(s >= threshold_fraction * s[0]))


@dataclass(frozen=True)
class DofProfile:
    """Analytic (and optionally numeric) DoF sampled over a distance grid."""

    distances: tuple[float, ...]
    analytic: tuple[float, ...]
    numeric: tuple[int, ...] | None = None
    aperture_tx: float = 0.0
    aperture_rx: float = 0.0
    wavelength: float = 0.0

    def __post_init__(self):
        if len(self.analytic) != len(self.distances):
            raise ValidationError("analytic DoF vector length must match distances")
        if self.numeric is not None and len(self.numeric) != len(self.distances):
            raise ValidationError("numeric DoF vector length must match distances")

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["distance_m", "analytic_dof", "numeric_dof"])
            for i, r in enumerate(self.distances):
                num = "" if self.numeric is None else self.numeric[i]
                w.writerow([repr(float(r)), repr(float(self.analytic[i])), num])
