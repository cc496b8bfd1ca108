"""Enumeration caps. Each default can be overridden from the environment."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import DomainError


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"{name} must be an integer, got {raw!r}") from None
    if value < 0:
        raise DomainError(f"{name} must be non-negative")
    return value


@dataclass(frozen=True)
class Limits:
    # 2**max_args subsets are scanned by the extension enumerator
    max_args: int = field(default_factory=lambda: _env_int("BIPOLAR_AGG_MAX_ARGS", 20))
    # total number of profiles an exhaustive check may visit
    max_profiles: int = field(default_factory=lambda: _env_int("BIPOLAR_AGG_MAX_PROFILES", 2**20))
    # candidate (base, extras) combinations tried by the meta-witness search
    max_candidates: int = field(default_factory=lambda: _env_int("BIPOLAR_AGG_MAX_CANDIDATES", 2**20))


def default_limits() -> Limits:
    return Limits()
