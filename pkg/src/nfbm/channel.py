"""Line-of-sight channel synthesis with spherical or planar wavefronts.

Every entry of a spherical-wave channel uses the exact element-pair distance
in both its free-space amplitude and its phase. The plane-wave channel is the
rank-1 far-field reference built from center-to-center steering vectors.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import SingularGeometryError, ValidationError
from .geometry import ArrayGeometry

FOUR_PI = 4.0 * np.pi


@dataclass(frozen=True)
class ChannelMatrix:
    """Complex gain matrix between a transmit and a receive array.

    ``entries`` has shape (rx_elements, tx_elements). ``r_cal`` is None for
    absolute free-space gains; otherwise every entry of the absolute channel
    has been multiplied by 4*pi*r_cal/lambda so a single-element link at
    distance ``r_cal`` has unit gain.
    """

    entries: np.ndarray
    distance: float     # center-to-center, m
    wavelength: float   # m
    r_cal: float | None = None

    @property
    def rx_elements(self) -> int:
        return self.entries.shape[0]

    @property
    def tx_elements(self) -> int:
        return self.entries.shape[1]


def _pair_distances(tx: ArrayGeometry, rx: ArrayGeometry) -> np.ndarray:
    """(rx, tx) matrix of exact element-pair distances."""
    pt = tx.element_positions()
    pr = rx.element_positions()
    diff = pr[:, None, :] - pt[None, :, :]
    return np.linalg.norm(diff, axis=2)


def _check_pair(tx: ArrayGeometry, rx: ArrayGeometry) -> float:
    if tx.carrier_frequency != rx.carrier_frequency:
        raise ValidationError(
            f"carrier frequency mismatch: tx {tx.carrier_frequency} Hz vs rx {rx.carrier_frequency} Hz"
        )
    return tx.wavelength


def _calibration_scale(wavelength: float, r_cal: float | None) -> float:
    if r_cal is None:
        return 1.0
    if not r_cal > 0:
        raise ValidationError(f"calibration distance must be positive, got {r_cal}")
    return FOUR_PI * r_cal / wavelength


def spherical_los_channel(tx: ArrayGeometry, rx: ArrayGeometry, r_cal: float | None = None) -> ChannelMatrix:
    """Exact spherical-wavefront LoS channel.

    entry(m, n) = lambda/(4*pi*r_mn) * exp(-j*2*pi*r_mn/lambda) with r_mn the
    Euclidean distance between rx element m and tx element n, optionally
    rescaled by the calibration factor.
    """
    lam = _check_pair(tx, rx)
    r = _pair_distances(tx, rx)
    if np.any(r <= 0.0):
        raise SingularGeometryError("arrays overlap: at least one element pair coincides")
    amp = lam / (FOUR_PI * r) * _calibration_scale(lam, r_cal)
    h = amp * np.exp(-2j * np.pi * r / lam)
    dist = float(np.linalg.norm(np.asarray(rx.center) - np.asarray(tx.center)))
    return ChannelMatrix(entries=h, distance=dist, wavelength=lam, r_cal=r_cal)


def planewave_channel(tx: ArrayGeometry, rx: ArrayGeometry, r_cal: float | None = None) -> ChannelMatrix:
    """Rank-1 far-field reference along the center-to-center direction."""
    lam = _check_pair(tx, rx)
    ct = np.asarray(tx.center)
    cr = np.asarray(rx.center)
    d = cr - ct
    r0 = float(np.linalg.norm(d))
    if r0 <= 0.0:
        raise SingularGeometryError("array centers coincide")
    u = d / r0
    off_t = tx.element_positions() - ct
    off_r = rx.element_positions() - cr
    a_tx = np.exp(-2j * np.pi * (off_t @ u) / lam)
    a_rx = np.exp(-2j * np.pi * (off_r @ u) / lam)
    gain = lam / (FOUR_PI * r0) * _calibration_scale(lam, r_cal)
    h = gain * np.exp(-2j * np.pi * r0 / lam) * np.outer(a_rx, np.conj(a_tx))
    return ChannelMatrix(entries=h, distance=r0, wavelength=lam, r_cal=r_cal)


def awgn_sample(dimension: int, noise_variance: float, rng: np.random.Generator) -> np.ndarray:
    """Circularly-symmetric complex Gaussian vector with per-entry variance
    ``noise_variance`` (each real part carries half)."""
    if dimension < 1:
        raise ValidationError(f"dimension must be positive, got {dimension}")
    if noise_variance < 0:
        raise ValidationError(f"noise_variance must be non-negative, got {noise_variance}")
    scale = np.sqrt(noise_variance / 2.0)
    return scale * (rng.standard_normal(dimension) + 1j * rng.standard_normal(dimension))


def export_channel_csv(ch: ChannelMatrix, csv_path: str | Path) -> Path:
    """Write the channel as CSV rows with interleaved real/imag columns and a
    JSON metadata sidecar next to it. Returns the sidecar path."""
    csv_path = Path(csv_path)
    with open(csv_path, "w", newline="") as f:
        w = csv.writer(f)
        header: list[str] = []
        for n in range(ch.tx_elements):
            header += [f"re_{n}", f"im_{n}"]
        w.writerow(header)
        for m in range(ch.rx_elements):
            row: list[str] = []
            for n in range(ch.tx_elements):
                row += [repr(float(ch.entries[m, n].real)), repr(float(ch.entries[m, n].imag))]
            w.writerow(row)
    sidecar = csv_path.with_suffix(".json")
    meta = {
        "rx_elements": ch.rx_elements,
        "tx_elements": ch.tx_elements,
        "distance_m": ch.distance,
        "wavelength_m": ch.wavelength,
        "normalization": "absolute" if ch.r_cal is None else "calibrated",
        "r_cal_m": ch.r_cal,
    }
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True))
    return sidecar


def load_channel_csv(csv_path: str | Path) -> ChannelMatrix:
    """Inverse of :func:`export_channel_csv`."""
    csv_path = Path(csv_path)
    meta = json.loads(csv_path.with_suffix(".json").read_text())
    rows = []
    with open(csv_path, newline="") as f:
        reader = csv.reader(f)
        next(reader)  # header
        for raw in reader:
            vals = np.asarray([float(x) for x in raw])
            rows.append(vals[0::2] + 1j * vals[1::2])
    h = np.asarray(rows)
    if h.shape != (meta["rx_elements"], meta["tx_elements"]):
        raise ValidationError("channel CSV dimensions disagree with sidecar metadata")
    return ChannelMatrix(
        entries=h,
        distance=meta["distance_m"],
        wavelength=meta["wavelength_m"],
        r_cal=meta["r_cal_m"],
    )
