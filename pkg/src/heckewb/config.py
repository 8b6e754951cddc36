"""Workbench configuration."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

__all__ = ["WorkbenchConfig", "DEFAULT_CACHE"]

DEFAULT_CACHE = os.path.join(
    os.path.expanduser("~"), ".cache", "heckewb", "kl_cache.json"
)


@dataclass
class WorkbenchConfig:
    """Run parameters shared by the CLI commands.

    q is the exact rational specialization of v (default 3); N the unit
    label modulus (even); oracle_threshold caps the standard-module
    dimension the brute-force decomposition will attempt.
    """

    n: int = 3
    q: Fraction = Fraction(3)
    modulus: int = 2
    oracle_threshold: int = 240
    cache_path: str = field(default_factory=lambda: os.environ.get(
        "WORKBENCH_CACHE", DEFAULT_CACHE
    ))

    def __post_init__(self):
        self.q = Fraction(self.q)
        if self.q <= 1:
            raise ValueError("q must be a rational greater than 1")
        if self.modulus % 2 != 0:
            raise ValueError("unit modulus N must be even")
        if self.oracle_threshold < math.factorial(self.n):
            raise ValueError(
                f"oracle_threshold {self.oracle_threshold} below n! = "
                f"{math.factorial(self.n)}"
            )
