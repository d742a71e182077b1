"""Experiment configuration: a flat key/value text format with units in key names."""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import ConfigError

_VEC_KEYS = {"bs_center_xyz_m", "bs_axis_xyz", "ue_center_xyz_m", "ue_axis_xyz", "distances_m"}


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved experiment parameters; round-trips losslessly through text."""

    preset: str = "custom"
    # geometry
    bs_elements: int = 256
    bs_spacing_in_wavelengths: float = 0.5
    bs_center_xyz_m: tuple[float, ...] = (0.0, 0.0, 0.0)
    bs_axis_xyz: tuple[float, ...] = (1.0, 0.0, 0.0)
    ue_elements: int = 48
    ue_spacing_in_wavelengths: float = 0.5
    ue_center_xyz_m: tuple[float, ...] = (0.0, 0.0, 0.0)
    ue_axis_xyz: tuple[float, ...] = (1.0, 0.0, 0.0)
    frequency_ghz: float = 28.0
    # sweep / operating point
    distances_m: tuple[float, ...] = (50.0,)
    snr_db: float = 20.0
    k_t: int = 1
    k_r: int = 32
    # modulation (SER experiments)
    constellation: str = "16qam"
    index_bits: int = 2
    trials: int = 200000
    seed: int = 12345
    # channel normalization
    normalization: str = "calibrated"  # absolute | calibrated
    r_cal_m: float = 50.0
    # algorithm knobs
    subset_cap: int = 1024
    dof_threshold_fraction: float = 0.01
    bm_gain_floor: float = 0.35
    ser_snr_ref_m: float = 5.0

    def validate(self) -> None:
        if any(r <= 0 for r in self.distances_m):
            raise ConfigError("distances_m must be strictly positive")
        if list(self.distances_m) != sorted(self.distances_m) and list(
            self.distances_m
        ) != sorted(self.distances_m, reverse=True):
            raise ConfigError("distances_m must be sorted")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.normalization not in ("absolute", "calibrated"):
            raise ConfigError(f"unknown normalization {self.normalization!r}")
        if self.bs_elements < 1 or self.ue_elements < 1:
            raise ConfigError("element counts must be >= 1")
        if self.k_t < 1 or self.k_r < 1:
            raise ConfigError("chain counts must be >= 1")

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name in _VEC_KEYS:
                s = ",".join(repr(float(x)) for x in v)
            elif isinstance(v, bool):
                s = str(v).lower()
            elif isinstance(v, float):
                s = repr(v)
            else:
                s = str(v)
            lines.append(f"{f.name} = {s}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {f.name: (list(v) if isinstance((v := getattr(self, f.name)), tuple) else v)
                for f in fields(self)}

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    def with_overrides(self, overrides: dict[str, str]) -> "ExperimentConfig":
        return replace(self, **_parse_items(overrides))


def _parse_items(items: dict[str, str]) -> dict:
    typed: dict = {}
    field_types = {f.name: f.type for f in fields(ExperimentConfig)}
    for key, raw in items.items():
        if key not in field_types:
            raise ConfigError(f"unknown config key {key!r}")
        raw = str(raw).strip()
        try:
            if key in _VEC_KEYS:
                typed[key] = tuple(float(x) for x in raw.split(",") if x.strip() != "")
            elif key in ("bs_elements", "ue_elements", "k_t", "k_r", "index_bits",
                         "trials", "seed", "subset_cap"):
                typed[key] = int(raw)
            elif key in ("preset", "constellation", "normalization"):
                typed[key] = raw
            else:
                typed[key] = float(raw)
        except ValueError as exc:
            raise ConfigError(f"cannot parse value for {key!r}: {raw!r}") from exc
    return typed


def parse_config_text(text: str) -> ExperimentConfig:
    items: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, _, value = stripped.partition("=")
        items[key.strip()] = value.strip()
    cfg = ExperimentConfig(**_parse_items(items))
    cfg.validate()
    return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    return parse_config_text(Path(path).read_text())


def parse_override(item: str) -> tuple[str, str]:
    """Split a 'key=value' CLI override."""
    if "=" not in item:
        raise ConfigError(f"override must look like key=value, got {item!r}")
    key, _, value = item.partition("=")
    return key.strip(), value.strip()
