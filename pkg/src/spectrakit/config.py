"""Resource caps and run configuration."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import DomainError

STANDARD_TABLEAU_CAP = 10
SEMISTANDARD_CAP = 30  # size * d
CHARACTER_TABLE_CAP = 22
KRONECKER_CAP = 30
DENSE_CAP = 4096  # d**k for dense tensor operators
PERMUTATION_SUM_CAP = 8  # k for sums over all of S_k

DEFAULT_CAPS = {
    "standard_tableaux": STANDARD_TABLEAU_CAP,
    "semistandard": SEMISTANDARD_CAP,
    "character_table": CHARACTER_TABLE_CAP,
    "kronecker": KRONECKER_CAP,
    "dense": DENSE_CAP,
}


def thread_count(default: int | None = None) -> int:
    """Worker count for task pools, capped by SPECTRAKIT_THREADS."""
    env = os.environ.get("SPECTRAKIT_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise DomainError(f"SPECTRAKIT_THREADS must be an integer, got {env!r}")
        if n < 1:
            raise DomainError("SPECTRAKIT_THREADS must be positive")
        return n
    return default or min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class RunConfig:
    seed: int | None = None
    tolerance: float = 1e-8
    caps: dict = field(default_factory=lambda: dict(DEFAULT_CAPS))
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        for name, value in self.caps.items():
            if value <= 0:
                raise DomainError(f"cap {name} must be positive")
        if self.format not in ("json", "csv"):
            raise DomainError(f"unknown output format {self.format!r}")
