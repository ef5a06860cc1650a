import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

from .ReadFiles import read_config

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config.yml"
CONFIG_ENV_VAR = "SETREACH_CONFIG"


@dataclass(frozen=True)
class PlotColors:
    full: str = "#1f4e9c"
    boundary: str = "#c62828"
    safe: str = "#2e7d32"
    mc: str = "#f9a825"
    hashsalt: str = "setreach"


@dataclass(frozen=True)
class Settings:
    domain: str = "box"
    mode: str = "auto"
    grid: tuple = (10,)
    max_refinements: int = 3
    falsify_samples: int = 0
    mc_samples: int = 10000
    seed: int = 0
    n_jobs: int = 1
    chunk_size: int = 2048
    log_level: str = "INFO"
    log_file: str | None = None
    plot: PlotColors = field(default_factory=PlotColors)


def _as_grid(value):
    if isinstance(value, int):
        return (value,)
    return tuple(int(v) for v in value)


def load_settings(path=None):
    """
    Load settings from ``path``, the ``SETREACH_CONFIG`` file, or the packaged
    ``config.yml``, in that order. Keys missing from the file keep their defaults.
    """
    path = path or os.environ.get(CONFIG_ENV_VAR) or DEFAULT_CONFIG_PATH
    config = read_config(path)
    logger.debug(f"Loaded settings from {path}")

    verify = config.get("verify", {})
    mc = config.get("monte_carlo", {})
    parallel = config.get("parallel", {})
    logs = config.get("logging", {})
    defaults = Settings()

    return Settings(
        domain=verify.get("domain", defaults.domain),
        mode=verify.get("mode", defaults.mode),
        grid=_as_grid(verify.get("grid", defaults.grid)),
        max_refinements=int(verify.get("max_refinements", defaults.max_refinements)),
        falsify_samples=int(verify.get("falsify_samples", defaults.falsify_samples)),
        mc_samples=int(mc.get("samples", defaults.mc_samples)),
        seed=int(mc.get("seed", defaults.seed)),
        n_jobs=int(parallel.get("n_jobs", defaults.n_jobs)),
        chunk_size=int(parallel.get("chunk_size", defaults.chunk_size)),
        log_level=str(logs.get("level", defaults.log_level)),
        log_file=logs.get("file", defaults.log_file),
        plot=PlotColors(**config.get("plot", {})),
    )
