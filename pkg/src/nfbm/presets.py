"""Named experiment presets, the generic sweep runner, and result emission.

Each preset writes a plot-ready CSV, a JSON manifest with the fully resolved
configuration, and (by default) a rendered PNG figure. CSV bodies are
byte-reproducible for a fixed seed and configuration.
"""
from __future__ import annotations

import csv
import json
import time
from pathlib import Path

import numpy as np

from . import __version__
from .beamspace import decompose
from .channel import spherical_los_channel
from .config import ExperimentConfig
from .dof import analytic_dof, effective_dof
from .errors import ConfigError, NfbmError, UnknownPresetError, ValidationError
from .geometry import build_ula
from .mc import binomial_interval, run_ser
from .modulation import bits_per_point
from .schemes import bbs_rate, bm_rate, build_signal_set

PRESET_NAMES = ("fig2", "fig3", "fig4", "fig5")
SWEEP_AXES = ("distance", "snr_db", "K_r", "K_t", "trials")

_PAYLOAD_BY_BITS = {1: "bpsk", 2: "qpsk", 4: "16qam", 6: "64qam"}


def _fig2_distances() -> tuple[float, ...]:
    return tuple(round(float(r), 4) for r in np.geomspace(1.0, 200.0, 60))


def default_config(preset: str) -> ExperimentConfig:
    if preset == "fig2":
        return ExperimentConfig(preset="fig2", ue_elements=128, distances_m=_fig2_distances())
    if preset == "fig3":
        return ExperimentConfig(
            preset="fig3",
            ue_elements=48,
            distances_m=(50.0, 40.0, 30.0, 25.0, 20.0, 15.0, 10.0, 5.0, 2.0, 1.0),
        )
    if preset == "fig4":
        return ExperimentConfig(
            preset="fig4",
            ue_elements=48,
            distances_m=(50.0, 25.0, 10.0, 5.0, 1.0),
            trials=200000,
        )
    if preset == "fig5":
        return ExperimentConfig(preset="fig5", ue_elements=48, distances_m=(5.0,))
    raise UnknownPresetError(f"unknown preset {preset!r}; available: {', '.join(PRESET_NAMES)}")


def derive_seed(master: int, *key: int) -> int:
    return int(np.random.SeedSequence(entropy=master, spawn_key=key).generate_state(1)[0])


def _r_cal(cfg: ExperimentConfig) -> float | None:
    return cfg.r_cal_m if cfg.normalization == "calibrated" else None


def ue_geometry(cfg: ExperimentConfig):
    lam = 299_792_458.0 / (cfg.frequency_ghz * 1e9)
    return build_ula(
        cfg.ue_elements,
        cfg.ue_spacing_in_wavelengths * lam,
        cfg.frequency_ghz * 1e9,
        center=cfg.ue_center_xyz_m,
        axis=cfg.ue_axis_xyz,
    )


def bs_geometry(cfg: ExperimentConfig, distance: float):
    lam = 299_792_458.0 / (cfg.frequency_ghz * 1e9)
    center = tuple(np.asarray(cfg.bs_center_xyz_m) + np.array([0.0, 0.0, distance]))
    return build_ula(
        cfg.bs_elements,
        cfg.bs_spacing_in_wavelengths * lam,
        cfg.frequency_ghz * 1e9,
        center=center,
        axis=cfg.bs_axis_xyz,
    )


def link_channel(cfg: ExperimentConfig, distance: float):
    """Uplink channel: the user array transmits, the base station receives."""
    return spherical_los_channel(ue_geometry(cfg), bs_geometry(cfg, distance), r_cal=_r_cal(cfg))


# ---------------------------------------------------------------------------
# per-point evaluators


def dof_point(cfg: ExperimentConfig, distance: float, numeric: bool = True) -> dict:
    ue = ue_geometry(cfg)
    bs = bs_geometry(cfg, distance)
    lam = ue.wavelength
    row = {
        "distance_m": distance,
        "analytic_dof": analytic_dof(distance, lam, ue.aperture("span"), bs.aperture("span")),
    }
    if numeric:
        h = spherical_los_channel(ue, bs, r_cal=_r_cal(cfg))
        s = np.linalg.svd(h.entries, compute_uv=False)
        row["numeric_dof"] = effective_dof(s, cfg.dof_threshold_fraction)
    return row


def se_point(cfg: ExperimentConfig, distance: float) -> dict:
    """Spectral efficiency of both schemes; snr_db is the per-element receive
    SNR of the calibrated channel (unit entry gain at r_cal_m)."""
    h = link_channel(cfg, distance)
    d = decompose(h, cfg.dof_threshold_fraction)
    power = 10.0 ** (cfg.snr_db / 10.0)
    bbs = bbs_rate(d, cfg.k_t, cfg.k_r, power, 1.0)
    bm, _ = bm_rate(d, cfg.k_t, cfg.k_r, power, 1.0, subset_cap=cfg.subset_cap)
    return {
        "distance_m": distance,
        "bbs_se": bbs,
        "bm_se": bm,
        "gain": (bm - bbs) / bbs,
    }


def _bm_feasible(d, cfg: ExperimentConfig) -> bool:
    """BM keeps its index bits only when the weakest beam it would ride is
    within ``bm_gain_floor`` of the strongest (in power) and the payload bits
    map to an available constellation."""
    total_bits = cfg.k_t * bits_per_point(cfg.constellation)
    payload_bits = total_bits - cfg.index_bits
    if payload_bits < cfg.k_t or payload_bits % cfg.k_t:
        return False
    if payload_bits // cfg.k_t not in _PAYLOAD_BY_BITS:
        return False
    n_avail = min(d.effective_dof, cfg.k_r)
    if n_avail < max(cfg.k_t, 1) or cfg.k_t > n_avail:
        return False
    # beams actually used by the 2**index_bits best size-k_t subsets
    from .beamspace import enumerate_subsets

    subsets = enumerate_subsets(d.singular_values[:n_avail], min(cfg.k_t, n_avail), cap=cfg.subset_cap)
    if len(subsets) < (1 << cfg.index_bits):
        return False
    worst = max(max(s.indices) for s in subsets[: 1 << cfg.index_bits])
    s = d.singular_values
    return bool(s[worst] ** 2 >= cfg.bm_gain_floor * s[0] ** 2)


def ser_noise_variance(cfg: ExperimentConfig, power: float = 1.0) -> float:
    """Noise level making the strongest eigenbeam at ``ser_snr_ref_m`` see
    exactly ``snr_db`` of post-combining SNR."""
    h_ref = link_channel(cfg, cfg.ser_snr_ref_m)
    sigma1 = float(np.linalg.svd(h_ref.entries, compute_uv=False)[0])
    return power * sigma1**2 / 10.0 ** (cfg.snr_db / 10.0)


def ser_point(cfg: ExperimentConfig, distance: float, row_index: int = 0,
              noise_variance: float | None = None) -> dict:
    power = 1.0
    if noise_variance is None:
        noise_variance = ser_noise_variance(cfg, power)
    h = link_channel(cfg, distance)
    d = decompose(h, cfg.dof_threshold_fraction)
    bbs_set = build_signal_set(d, 0, cfg.constellation, cfg.k_t, power, subset_cap=cfg.subset_cap)
    bbs_res = run_ser(h, bbs_set, cfg.k_r, noise_variance, cfg.trials,
                      derive_seed(cfg.seed, row_index, 0))
    if _bm_feasible(d, cfg):
        payload = _PAYLOAD_BY_BITS[
            (cfg.k_t * bits_per_point(cfg.constellation) - cfg.index_bits) // cfg.k_t
        ]
        bm_set = build_signal_set(d, cfg.index_bits, payload, cfg.k_t, power,
                                  subset_cap=cfg.subset_cap)
        bm_res = run_ser(h, bm_set, cfg.k_r, noise_variance, cfg.trials,
                         derive_seed(cfg.seed, row_index, 1))
        fallback = 0
    else:
        bm_res = bbs_res  # too few strong beams: BM degenerates to best-beam signaling
        fallback = 1
    return {
        "distance_m": distance,
        "bbs_ser": bbs_res.estimate,
        "bbs_ci_low": bbs_res.confidence_interval_95[0],
        "bbs_ci_high": bbs_res.confidence_interval_95[1],
        "bm_ser": bm_res.estimate,
        "bm_ci_low": bm_res.confidence_interval_95[0],
        "bm_ci_high": bm_res.confidence_interval_95[1],
        "bm_fallback": fallback,
        "trials": cfg.trials,
    }


def chains_rows(cfg: ExperimentConfig) -> list[dict]:
    distance = cfg.distances_m[0]
    h = link_channel(cfg, distance)
    d = decompose(h, cfg.dof_threshold_fraction)
    power = 10.0 ** (cfg.snr_db / 10.0)
    rows = []
    for k_r in range(1, d.effective_dof + 5):
        bbs = bbs_rate(d, cfg.k_t, k_r, power, 1.0)
        bm, _ = bm_rate(d, cfg.k_t, k_r, power, 1.0, subset_cap=cfg.subset_cap)
        rows.append({"k_r": k_r, "bbs_se": bbs, "bm_se": bm, "effective_dof": d.effective_dof})
    return rows


# ---------------------------------------------------------------------------
# runners


def _write_csv(path: Path, rows: list[dict]) -> None:
    if not rows:
        raise ValidationError("no result rows to write")
    header = list(rows[0].keys())
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        for row in rows:
            out = []
            for key in header:
                v = row[key]
                out.append(repr(float(v)) if isinstance(v, float) else str(v))
            w.writerow(out)


def _write_manifest(path: Path, cfg: ExperimentConfig, outputs: list[str],
                    failures: list[dict], extra: dict | None = None) -> dict:
    manifest = {
        "tool_version": __version__,
        "preset": cfg.preset,
        "seed": cfg.seed,
        "config": cfg.to_dict(),
        "outputs": outputs,
        "failures": failures,
        "created_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    if extra:
        manifest.update(extra)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return manifest


def preset_rows(cfg: ExperimentConfig) -> list[dict]:
    if cfg.preset == "fig2":
        return [dof_point(cfg, r) for r in cfg.distances_m]
    if cfg.preset in ("fig3", "custom"):
        return [se_point(cfg, r) for r in cfg.distances_m]
    if cfg.preset == "fig4":
        noise = ser_noise_variance(cfg)
        return [ser_point(cfg, r, i, noise) for i, r in enumerate(cfg.distances_m)]
    if cfg.preset == "fig5":
        return chains_rows(cfg)
    raise UnknownPresetError(f"unknown preset {cfg.preset!r}; available: {', '.join(PRESET_NAMES)}")


def run_preset(
    name: str,
    out_dir: str | Path,
    overrides: dict[str, str] | None = None,
    render_figures: bool = True,
) -> dict:
    cfg = default_config(name)
    if overrides:
        cfg = cfg.with_overrides(overrides)
    cfg.validate()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = preset_rows(cfg)
    csv_path = out / f"{name}.csv"
    _write_csv(csv_path, rows)
    outputs = [csv_path.name]
    if render_figures:
        from . import plotting

        fig_path = out / f"{name}.png"
        plotting.render_preset_figure(name, rows, fig_path)
        outputs.append(fig_path.name)
    manifest_path = out / f"{name}_manifest.json"
    return _write_manifest(manifest_path, cfg, outputs, failures=[])


_AXIS_FIELD = {"snr_db": "snr_db", "K_r": "k_r", "K_t": "k_t", "trials": "trials"}


def run_sweep(
    axis: str,
    values: list[float],
    base_preset: str = "fig3",
    out_dir: str | Path = ".",
    overrides: dict[str, str] | None = None,
    render_figures: bool = True,
) -> dict:
    if axis not in SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}; available: {', '.join(SWEEP_AXES)}")
    if not values:
        raise ConfigError("sweep needs at least one value")
    cfg = default_config(base_preset)
    if overrides:
        cfg = cfg.with_overrides(overrides)
    cfg.validate()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows: list[dict] = []
    failures: list[dict] = []
    for i, value in enumerate(values):
        row_cfg = cfg
        try:
            if axis == "distance":
                row_cfg = row_cfg.with_overrides({"distances_m": repr(float(value))})
            else:
                field = _AXIS_FIELD[axis]
                raw = str(int(value)) if field in ("k_r", "k_t", "trials") else repr(float(value))
                row_cfg = row_cfg.with_overrides({field: raw})
                row_cfg = row_cfg.with_overrides(
                    {"distances_m": ",".join(repr(float(r)) for r in (cfg.distances_m[0],))}
                )
            row_cfg = row_cfg.with_overrides({"seed": str(derive_seed(cfg.seed, i))})
            r0 = row_cfg.distances_m[0]
            if cfg.preset == "fig2":
                metrics = dof_point(row_cfg, r0)
            elif cfg.preset == "fig4":
                metrics = ser_point(row_cfg, r0, row_index=0)
            else:
                metrics = se_point(row_cfg, r0)
            row = {axis: value}
            row.update(metrics)
            rows.append(row)
        except NfbmError as exc:
            failures.append({"row": i, "value": value,
                             "error": type(exc).__name__, "message": str(exc)})
    outputs = []
    if rows:
        csv_path = out / "sweep.csv"
        _write_csv(csv_path, rows)
        outputs.append(csv_path.name)
        if render_figures:
            from . import plotting

            fig_path = out / "sweep.png"
            plotting.render_sweep_figure(axis, rows, fig_path)
            outputs.append(fig_path.name)
    manifest_path = out / "sweep_manifest.json"
    return _write_manifest(manifest_path, cfg, outputs, failures,
                           extra={"axis": axis, "values": list(values)})


def run_dof(
    out_dir: str | Path,
    overrides: dict[str, str] | None = None,
    numeric: bool = True,
    render_figures: bool = True,
) -> dict:
    cfg = default_config("fig2")
    if overrides:
        cfg = cfg.with_overrides(overrides)
    cfg.validate()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = [dof_point(cfg, r, numeric=numeric) for r in cfg.distances_m]
    csv_path = out / "dof.csv"
    _write_csv(csv_path, rows)
    outputs = [csv_path.name]
    if render_figures:
        from . import plotting

        fig_path = out / "dof.png"
        plotting.render_preset_figure("fig2", rows, fig_path)
        outputs.append(fig_path.name)
    return _write_manifest(out / "dof_manifest.json", cfg, outputs, failures=[])
