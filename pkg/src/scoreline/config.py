"""Runtime configuration: a flat key-value file, every key flag-overridable."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .domain import ScorelineError
from .outliers import FILTER_METHODS, MadConfig, SINGLE_MAD
from .srt import ProjectionConfig


class ConfigError(ScorelineError):
    pass


@dataclass(frozen=True)
class AppConfig:
    data_dir: str = "."
    pad: int = 5
    mad_consistency: float = 0.6745
    mad_threshold: float = 2.24
    fourier_order: int = 3
    guard: int = 10
    port: int = 8080
    pd_750: tuple[int, ...] = (5, 6, 7)
    pd_480: tuple[int, ...] = (3, 4, 5)
    outlier_method: str = SINGLE_MAD

    def __post_init__(self):
        for name in ("pad", "fourier_order", "guard", "port"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.mad_consistency <= 0 or self.mad_threshold <= 0:
            raise ConfigError("MAD constants must be positive")
        if self.outlier_method not in FILTER_METHODS:
            raise ConfigError(f"unknown outlier_method {self.outlier_method!r}")

    @property
    def mad(self) -> MadConfig:
        return MadConfig(self.mad_consistency, self.mad_threshold)

    @property
    def projection(self) -> ProjectionConfig:
        return ProjectionConfig(order=self.fourier_order)

    def pd_defaults(self, scale_max: int) -> tuple[int, ...]:
        return self.pd_480 if scale_max == 480 else self.pd_750

    def require_data_dir(self) -> Path:
        path = Path(self.data_dir)
        if not path.is_dir():
            raise ConfigError(f"data directory does not exist: {path}")
        return path


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in str(text).split(",") if part.strip())


_PARSERS = {
    "data_dir": str,
    "pad": int,
    "mad_consistency": float,
    "mad_threshold": float,
    "fourier_order": int,
    "guard": int,
    "port": int,
    "pd_750": _parse_int_list,
    "pd_480": _parse_int_list,
    "outlier_method": str,
}


def load_config(path=None, overrides: dict | None = None) -> AppConfig:
    """Read `key = value` lines, then apply explicit overrides on top."""
    values: dict = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file does not exist: {path}")
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in _PARSERS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = _PARSERS[key](raw)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {raw!r}") from None
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in _PARSERS:
            raise ConfigError(f"unknown config key {key!r}")
        values[key] = _PARSERS[key](value) if isinstance(value, str) else value
    return AppConfig(**values)
