"""Runtime configuration: cache locations and tunables."""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_DB_URL = "https://www.lmfdb.org/api/ec_curvedata/?Clabel={label}1&_format=json"


def cache_dir() -> Path:
    return Path(os.environ.get("CRITPOLY_CACHE_DIR", "cache"))


def curve_db_url() -> str:
    return os.environ.get("CRITPOLY_CURVE_DB_URL", DEFAULT_DB_URL)


def atomic_write(path: Path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class PipelineConfig:
    """Knobs for one critical-polynomial computation."""

    algorithm: str = "auto"  # auto | dense | yang
    dense_threshold: int = 120  # d_N cutoff for auto
    t_exponent: int | None = 0  # None means 2g - 2
    terms: int | None = None  # override of the relation precision M
    seed: int = 20240601
    max_primes: int = 400
    cusp_multiplier: int | None = None  # Yang route: target k(T - [inf])
    eta_exponents: str | None = None  # Yang route: fixed h as "d:r,d:r"
    use_cache: bool = True
    threads: int = 1
    extra: dict = field(default_factory=dict)
