"""Pipeline configuration: one TOML file, CLI-flag overrides, one root seed.

All stage randomness is derived from the root seed keyed by stage or
purpose name, so any artifact can be reproduced from the manifest entry
that recorded its config and seed.
"""
from __future__ import annotations

import hashlib
import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = ["PipelineConfig", "ConfigError", "load_config", "derive_seed"]


class ConfigError(ValueError):
    """Bad configuration file or option value."""


def derive_seed(root_seed: int, *names: str) -> int:
    """Deterministic 63-bit seed derived from the root seed and a name path."""
    digest = hashlib.sha256()
    digest.update(str(root_seed).encode())
    for name in names:
        digest.update(b"/")
        digest.update(name.encode())
    return int.from_bytes(digest.digest()[:8], "big") >> 1


@dataclass
class PipelineConfig:
    seed: int = 1848
    # diffusion
    diffusion_steps: int = 2
    boundaries: tuple[float, float, float] = (0.25, 0.5, 0.75)
    transpose: bool = False
    # sampling
    stratum_cap: int = 1500
    # crawl defaults (budget defaults to n // 5 when unset)
    jump_weight: float = 10.0
    budget: int | None = None
    # features
    snapshot_date: str | None = None  # ISO-8601; required by the features stage
    # content analysis
    negation_window: int = 3
    profanity_mode: str = "tokens_per_tweet"
    hashtag_top_k: int = 50
    lexicon_dir: str | None = None  # defaults to the bundled lexdata
    # statistics
    ci_level: float = 0.95
    bootstrap_resamples: int = 2000
    # annotation service
    serve_host: str = "127.0.0.1"
    serve_port: int = 8321
    open_registration: bool = True
    annotators: tuple[str, ...] = ()

    def with_overrides(self, **overrides: Any) -> "PipelineConfig":
        clean = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **clean) if clean else self


_ENV_OVERRIDES = {
    "USERSCOPE_HOST": ("serve_host", str),
    "USERSCOPE_PORT": ("serve_port", int),
}


def load_config(path: Path | str | None = None) -> PipelineConfig:
    """Config from TOML (all keys optional), then environment overrides."""
    values: dict[str, Any] = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
        known = set(PipelineConfig.__dataclass_fields__)
        for key, value in raw.items():
            if key not in known:
                raise ConfigError(f"unknown config key: {key}")
            if key in ("boundaries", "annotators"):
                value = tuple(value)
            values[key] = value
    for env, (key, cast) in _ENV_OVERRIDES.items():
        if env in os.environ:
            try:
                values[key] = cast(os.environ[env])
            except ValueError as exc:
                raise ConfigError(f"bad {env} value: {os.environ[env]!r}") from exc
    try:
        cfg = PipelineConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.boundaries != (0.25, 0.5, 0.75):
        b = cfg.boundaries
        if len(b) != 3 or not (0 < b[0] < b[1] < b[2] < 1):
            raise ConfigError(f"boundaries must be three increasing values in (0, 1): {b}")
    if cfg.profanity_mode not in ("tokens_per_tweet", "share_of_tweets"):
        raise ConfigError(f"unknown profanity_mode: {cfg.profanity_mode}")
    return cfg
