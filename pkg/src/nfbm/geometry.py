"""Uniform linear arrays, apertures, and the near/far-field boundary."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

SPEED_OF_LIGHT = 299_792_458.0  # m/s

_Vec3 = tuple[float, float, float]


@dataclass(frozen=True)
class ArrayGeometry:
    """A uniform linear array of isotropic elements.

    Elements sit on a line through ``center`` along the unit vector ``axis``,
    symmetric about the center with uniform ``spacing``.
    """

    num_elements: int
    spacing: float          # m
    carrier_frequency: float  # Hz
    center: _Vec3
    axis: _Vec3             # unit vector

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency

    def element_positions(self) -> np.ndarray:
        """(num_elements, 3) element coordinates in meters."""
        k = np.arange(self.num_elements) - (self.num_elements - 1) / 2.0
        return np.asarray(self.center) + np.outer(k * self.spacing, np.asarray(self.axis))

    def aperture(self, convention: str = "span") -> float:
        return aperture(self, convention)


def build_ula(
    num_elements: int,
    spacing: float,
    carrier_frequency: float,
    center=(0.0, 0.0, 0.0),
    axis=(1.0, 0.0, 0.0),
) -> ArrayGeometry:
    """Construct a ULA, normalizing the orientation axis.

    Raises ValidationError for non-positive element count, spacing or
    frequency, and for a zero axis vector.
    """
    if int(num_elements) != num_elements or num_elements < 1:
        raise ValidationError(f"num_elements must be a positive integer, got {num_elements}")
    if not spacing > 0:
        raise ValidationError(f"spacing must be positive, got {spacing}")
    if not carrier_frequency > 0:
        raise ValidationError(f"carrier_frequency must be positive, got {carrier_frequency}")
    ax = np.asarray(axis, dtype=float)
    c = np.asarray(center, dtype=float)
    if ax.shape != (3,) or c.shape != (3,):
        raise ValidationError("center and axis must be 3-vectors")
    norm = np.linalg.norm(ax)
    if norm == 0.0:
        raise ValidationError("axis must be non-zero")
    ax = ax / norm
    return ArrayGeometry(
        num_elements=int(num_elements),
        spacing=float(spacing),
        carrier_frequency=float(carrier_frequency),
        center=tuple(float(x) for x in c),
        axis=tuple(float(x) for x in ax),
    )


def aperture(g: ArrayGeometry, convention: str = "span") -> float:
    """Physical extent of the array.

    ``span`` is (N-1)*spacing, the distance between the outermost elements;
    ``count`` is N*spacing, the extent including half a spacing beyond each
    end element.
    """
    if convention == "span":
        return (g.num_elements - 1) * g.spacing
    if convention == "count":
        return g.num_elements * g.spacing
    raise ValidationError(f"unknown aperture convention {convention!r} (use 'span' or 'count')")


def fraunhofer_distance(aperture_m: float, wavelength: float) -> float:
    """Far-field boundary 2*D^2/lambda for an aperture of D meters."""
    if not wavelength > 0:
        raise ValidationError(f"wavelength must be positive, got {wavelength}")
    if aperture_m < 0:
        raise ValidationError(f"aperture must be non-negative, got {aperture_m}")
    return 2.0 * aperture_m * aperture_m / wavelength
