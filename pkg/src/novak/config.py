"""Run configuration and the ``key = value`` file format shared with
sequence spec files."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass

from .errors import InvalidArgument


def parse_key_values(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgument(f"line {line_no}: expected key = value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise InvalidArgument(f"line {line_no}: empty key")
        out[key] = value
    return out


@dataclass(frozen=True)
class RunConfig:
    cache: str | None = None
    trial_bound: int = 10**6
    rho_iterations: int = 200_000
    size_ceiling_bits: int = 1 << 24
    saturation_ceiling_bits: int = 1 << 20
    workers: int = 1
    format: str = "human"
    include_one: bool = True

    def __post_init__(self):
        for name in ("trial_bound", "rho_iterations", "size_ceiling_bits", "saturation_ceiling_bits", "workers"):
            if getattr(self, name) < 1:
                raise InvalidArgument(f"{name} must be positive")
        if self.format not in ("human", "json", "csv"):
            raise InvalidArgument(f"unknown output format {self.format!r}")

    def budget(self):
        from .arith import FactorBudget

        return FactorBudget(max(self.trial_bound, 2), self.rho_iterations)

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_sources(cls, config_text: str | None = None, **overrides) -> "RunConfig":
        """Defaults, then NOVAK_CACHE, then the config file, then explicit overrides."""
        values: dict = {}
        env_cache = os.environ.get("NOVAK_CACHE")
        if env_cache:
            values["cache"] = env_cache
        if config_text:
            for key, raw in parse_key_values(config_text).items():
                values[key] = _coerce(key, raw)
        values.update({k: v for k, v in overrides.items() if v is not None})
        unknown = set(values) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidArgument(f"unknown config keys: {sorted(unknown)}")
        return cls(**values)


_INT_KEYS = {"trial_bound", "rho_iterations", "size_ceiling_bits", "saturation_ceiling_bits", "workers"}


def _coerce(key: str, raw: str):
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise InvalidArgument(f"{key} must be an integer, got {raw!r}") from None
    if key == "include_one":
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise InvalidArgument(f"include_one must be a boolean, got {raw!r}")
    return raw
