"""Resource budgets for the enumerative parts of the pipeline."""

import logging
import time
from dataclasses import dataclass, replace
from typing import Any, Dict, Optional

import psutil

from .config import (
    DEFAULT_CLASS_SECONDS,
    DEFAULT_CLASS_SIZE,
    DEFAULT_GENERATION_CHECKS,
    DEFAULT_SAMPLE_EVERY,
    DEFAULT_SEED,
    DEFAULT_TABLE_ORDER,
    cfg_get,
)
from .errors import BudgetExceeded

logger = logging.getLogger(__name__)

_PROCESS = psutil.Process()


@dataclass(frozen=True)
class Budget:
    """Limits for class enumeration, class tables and triple censuses.

    Attributes:
        class_size: Largest class whose members are stored (fingerprints).
        class_seconds: Wall-clock limit for one class enumeration.
        table_order: Largest group order for which a complete class table
            is attempted.
        max_rss_mb: Resident memory ceiling for the process, or None.
        generation_checks: Largest number of generation tests in one census
            (one per centralizer orbit of counted pairs).
        sample_every: One in this many fingerprints keeps its full image table
            for collision checks.
        seed: Seed of every random choice (reports are reproducible).
    """

    class_size: int = DEFAULT_CLASS_SIZE
    class_seconds: float = DEFAULT_CLASS_SECONDS
    table_order: int = DEFAULT_TABLE_ORDER
    max_rss_mb: Optional[int] = None
    generation_checks: int = DEFAULT_GENERATION_CHECKS
    sample_every: int = DEFAULT_SAMPLE_EVERY
    seed: int = DEFAULT_SEED

    @classmethod
    def from_config(cls, cfg: Dict[str, Any], **overrides) -> "Budget":
        """Build a budget from a config dict; non-None overrides win."""
        budget = cls(
            class_size=int(cfg_get(cfg, "budget", "classSize", DEFAULT_CLASS_SIZE)),
            class_seconds=float(cfg_get(cfg, "budget", "classSeconds", DEFAULT_CLASS_SECONDS)),
            table_order=int(cfg_get(cfg, "budget", "tableOrder", DEFAULT_TABLE_ORDER)),
            max_rss_mb=cfg_get(cfg, "budget", "maxRssMb", None),
            generation_checks=int(cfg_get(cfg, "budget", "generationChecks", DEFAULT_GENERATION_CHECKS)),
            sample_every=int(cfg_get(cfg, "fingerprint", "sampleEvery", DEFAULT_SAMPLE_EVERY)),
            seed=int(cfg.get("seed", DEFAULT_SEED)),
        )
        return budget.with_overrides(**overrides)

    def with_overrides(self, **overrides) -> "Budget":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> Dict[str, str]:
        return {
            "class_size": str(self.class_size),
            "class_seconds": str(self.class_seconds),
            "table_order": str(self.table_order),
            "max_rss_mb": "none" if self.max_rss_mb is None else str(self.max_rss_mb),
            "generation_checks": str(self.generation_checks),
            "seed": str(self.seed),
        }


def rss_mb() -> float:
    """Resident set size of this process in MiB."""
    return _PROCESS.memory_info().rss / (1024 * 1024)


class BudgetGuard:
    """Tracks one budgeted computation (a class enumeration, a census).

    ``tick`` is cheap and meant for inner loops; the clock and psutil are only
    consulted every ``stride`` ticks.
    """

    def __init__(self, budget: Budget, label: str, stride: int = 4096):
        self.budget = budget
        self.label = label
        self.stride = stride
        self.started = time.monotonic()
        self.peak_rss_mb = rss_mb()
        self._ticks = 0

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def tick(self, count: int = 1, **diagnostics) -> None:
        self._ticks += count
        if self._ticks < self.stride:
            return
        self._ticks = 0
        self.check(**diagnostics)

    def check(self, **diagnostics) -> None:
        """Raise BudgetExceeded if time or memory ran out."""
        elapsed = self.elapsed
        if elapsed > self.budget.class_seconds:
            raise BudgetExceeded(
                f"{self.label}: time budget of {self.budget.class_seconds:g}s exhausted",
                {"elapsed_seconds": f"{elapsed:.1f}", **diagnostics},
            )
        current = rss_mb()
        self.peak_rss_mb = max(self.peak_rss_mb, current)
        if self.budget.max_rss_mb is not None and current > self.budget.max_rss_mb:
            raise BudgetExceeded(
                f"{self.label}: memory budget of {self.budget.max_rss_mb} MiB exhausted",
                {"rss_mb": f"{current:.0f}", **diagnostics},
            )

    def require_size(self, size: int, **diagnostics) -> None:
        if size > self.budget.class_size:
            raise BudgetExceeded(
                f"{self.label}: more than {self.budget.class_size} members",
                {"size_at_abort": str(size), **diagnostics},
            )
