import json

import numpy as np
import pytest

from nfbm.presets import (
    PRESET_NAMES,
    default_config,
    derive_seed,
    dof_point,
    preset_rows,
    run_preset,
    run_sweep,
    se_point,
    ser_noise_variance,
    ser_point,
)


def test_preset_names_all_buildable():
    for name in PRESET_NAMES:
        cfg = default_config(name)
        cfg.validate()
        assert cfg.preset == name


def test_derive_seed_stable_and_distinct():
    assert derive_seed(123, 0) == derive_seed(123, 0)
    assert derive_seed(123, 0) != derive_seed(123, 1)
    assert derive_seed(123, 0) != derive_seed(124, 0)


def test_se_point_gain_positive(fig3_cfg):
    row = se_point(fig3_cfg, 5.0)
    assert row["bm_se"] > row["bbs_se"] > 0
    assert row["gain"] > 0


def test_se_gain_increases_toward_array(fig3_cfg):
    gains = [se_point(fig3_cfg, r)["gain"] for r in (50.0, 10.0, 1.0)]
    assert gains[0] < gains[1] < gains[2]


def test_dof_point_fields(fig3_cfg):
    row = dof_point(fig3_cfg, 10.0)
    assert set(row) == {"distance_m", "analytic_dof", "numeric_dof"}
    assert row["analytic_dof"] > 1.0
    assert row["numeric_dof"] >= 1


def test_ser_point_far_distance_falls_back(fig3_cfg):
    cfg = default_config("fig4").with_overrides({"trials": "5000"})
    noise = ser_noise_variance(cfg)
    row = ser_point(cfg, 50.0, 0, noise)
    assert row["bm_fallback"] == 1
    assert row["bm_ser"] == row["bbs_ser"]


def test_ser_point_near_distance_uses_index_bits():
    cfg = default_config("fig4").with_overrides({"trials": "5000"})
    noise = ser_noise_variance(cfg)
    row = ser_point(cfg, 5.0, 0, noise)
    assert row["bm_fallback"] == 0
    assert row["bbs_ci_low"] <= row["bbs_ser"] <= row["bbs_ci_high"]


def test_fig5_bm_monotone_then_flat():
    cfg = default_config("fig5")
    rows = preset_rows(cfg)
    bm = [r["bm_se"] for r in rows]
    bbs = [r["bbs_se"] for r in rows]
    eff = rows[0]["effective_dof"]
    # single-stream best-beam capacity does not depend on the chain count
    assert max(bbs) - min(bbs) < 1e-9
    assert all(a <= b + 1e-12 for a, b in zip(bm, bm[1:]))
    flat = [r["bm_se"] for r in rows if r["k_r"] >= eff]
    assert max(flat) - min(flat) < 1e-9
    assert bm[-1] > bbs[-1]


def test_fig2_rows_monotone():
    cfg = default_config("fig2").with_overrides({"distances_m": "1.0,10.0,100.0"})
    rows = preset_rows(cfg)
    ana = [r["analytic_dof"] for r in rows]
    num = [r["numeric_dof"] for r in rows]
    assert ana[0] > ana[1] > ana[2]
    assert num[0] >= num[1] >= num[2]


def test_run_preset_byte_identical(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    over = {"distances_m": "50.0,5.0", "trials": "20000"}
    run_preset("fig4", a, overrides=over, render_figures=False)
    run_preset("fig4", b, overrides=over, render_figures=False)
    assert (a / "fig4.csv").read_bytes() == (b / "fig4.csv").read_bytes()


def test_run_preset_seed_changes_ser_rows(tmp_path):
    over = {"distances_m": "50.0", "trials": "20000"}
    run_preset("fig4", tmp_path / "a", overrides=over, render_figures=False)
    run_preset("fig4", tmp_path / "b", overrides={**over, "seed": "999"},
               render_figures=False)
    a = (tmp_path / "a" / "fig4.csv").read_text()
    b = (tmp_path / "b" / "fig4.csv").read_text()
    assert a != b


def test_fig2_csv_deterministic_without_mc(tmp_path):
    run_preset("fig2", tmp_path / "a", render_figures=False)
    run_preset("fig2", tmp_path / "b", render_figures=False)
    a = (tmp_path / "a" / "fig2.csv").read_bytes()
    assert a == (tmp_path / "b" / "fig2.csv").read_bytes()
    assert len(a.splitlines()) == 61  # header + 60 distances


def test_sweep_trials_shrinks_ci(tmp_path):
    # at 50 m the raw SER is large, so CI width scales like 1/sqrt(trials)
    manifest = run_sweep(
        "trials",
        [4000, 40000],
        base_preset="fig4",
        out_dir=tmp_path,
        overrides={"distances_m": "50.0"},
        render_figures=False,
    )
    assert manifest["failures"] == []
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    widths = [float(r["bbs_ci_high"]) - float(r["bbs_ci_low"]) for r in rows]
    assert widths[1] == pytest.approx(widths[0] / np.sqrt(10), rel=0.15)


def test_sweep_distance_axis(tmp_path):
    manifest = run_sweep(
        "distance", [50.0, 5.0], base_preset="fig3", out_dir=tmp_path,
        render_figures=False,
    )
    assert manifest["failures"] == []
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0].startswith("distance,")
    assert len(lines) == 3


def test_manifest_contents(tmp_path):
    manifest = run_preset("fig5", tmp_path, render_figures=False)
    on_disk = json.loads((tmp_path / "fig5_manifest.json").read_text())
    assert on_disk["preset"] == "fig5"
    assert on_disk["seed"] == manifest["seed"]
    assert on_disk["outputs"] == ["fig5.csv"]
    assert on_disk["failures"] == []
    assert "tool_version" in on_disk and "created_at" in on_disk
