"""Figure rendering for preset and sweep outputs."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _col(rows: list[dict], key: str) -> list:
    return [row[key] for row in rows]


def render_preset_figure(name: str, rows: list[dict], path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    if name == "fig2":
        r = _col(rows, "distance_m")
        ax.semilogx(r, _col(rows, "analytic_dof"), "-", label="analytic")
        if "numeric_dof" in rows[0]:
            ax.semilogx(r, _col(rows, "numeric_dof"), "--", marker=".", label="numeric")
        ax.set_xlabel("distance (m)")
        ax.set_ylabel("spatial DoF")
        ax.set_title("Spatial degrees of freedom vs. distance")
    elif name in ("fig3", "custom"):
        r = _col(rows, "distance_m")
        ax.plot(r, _col(rows, "bbs_se"), "o-", label="BBS")
        ax.plot(r, _col(rows, "bm_se"), "s-", label="BM")
        ax.invert_xaxis()
        ax.set_xlabel("distance (m)")
        ax.set_ylabel("spectral efficiency (bits/s/Hz)")
        ax.set_title("Spectral efficiency vs. distance")
    elif name == "fig4":
        r = _col(rows, "distance_m")
        floor = [max(v, 0.5 / rows[0]["trials"]) for v in _col(rows, "bbs_ser")]
        ax.semilogy(r, floor, "o-", label="BBS")
        floor = [max(v, 0.5 / rows[0]["trials"]) for v in _col(rows, "bm_ser")]
        ax.semilogy(r, floor, "s-", label="BM")
        ax.invert_xaxis()
        ax.set_xlabel("distance (m)")
        ax.set_ylabel("symbol error rate")
        ax.set_title("SER vs. distance (zero counts clipped to half a count)")
    elif name == "fig5":
        k = _col(rows, "k_r")
        ax.plot(k, _col(rows, "bbs_se"), "o-", label="BBS")
        ax.plot(k, _col(rows, "bm_se"), "s-", label="BM")
        ax.set_xlabel("receive RF chains")
        ax.set_ylabel("spectral efficiency (bits/s/Hz)")
        ax.set_title("Effect of receive RF chains on spectral efficiency")
    else:
        raise ValueError(f"no figure template for preset {name!r}")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep_figure(axis: str, rows: list[dict], path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    x = _col(rows, axis)
    numeric_keys = [
        k for k in rows[0]
        if k != axis and isinstance(rows[0][k], (int, float)) and not k.endswith(("_low", "_high"))
    ]
    for key in numeric_keys:
        ax.plot(x, _col(rows, key), marker="o", label=key)
    ax.set_xlabel(axis)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
