from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional

from ..errors import ConfigError
from ..hermitian import TOL_ABS, TOL_REL


@dataclass(frozen=True)
class SuiteConfig:
    """Everything that determines a suite run.

    ``n`` is the number of Jensen terms for ``jensen-sum`` and the number of
    mean arguments for ``mean-filter``. ``workers`` only affects scheduling,
    never the report contents.
    """

    suite: str
    dim: int = 4
    dim_out: Optional[int] = None
    trials: int = 200
    seed: int = 0
    tol_abs: float = TOL_ABS
    tol_rel: float = TOL_REL
    cond_cap: float = 1e3
    map: Optional[str] = None
    mean: Optional[str] = None
    channel: Optional[str] = None
    n: Optional[int] = None
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.dim < 1 or (self.dim_out is not None and self.dim_out < 1):
            raise ConfigError("dimensions must be >= 1")
        if self.tol_abs <= 0 or self.tol_rel <= 0:
            raise ConfigError("tolerances must be > 0")
        if self.cond_cap < 1:
            raise ConfigError("cond_cap must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.n is not None and self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    @property
    def out_dim(self) -> int:
        return self.dim if self.dim_out is None else self.dim_out

    def with_(self, **changes) -> "SuiteConfig":
        return replace(self, **changes)

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("workers")
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "suite" not in data:
            raise ConfigError("config needs a 'suite' entry")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path) -> "SuiteConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(data)
