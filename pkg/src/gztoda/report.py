"""Check-report containers shared by the verification suites and the CLI."""

from __future__ import annotations

import time
from dataclasses import dataclass, field


@dataclass
class CheckResult:
    """One named check: observed worst error against its threshold."""

    name: str
    max_error: float
    threshold: float
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.max_error < self.threshold)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "max_error": float(self.max_error),
            "threshold": float(self.threshold),
            "pass": self.passed,
        }
        if self.extra:
            d["extra"] = self.extra
        return d


@dataclass
class SuiteReport:
    """A suite of checks plus the reproducibility context."""

    suite: str
    checks: list[CheckResult] = field(default_factory=list)
    seed: int | None = None
    wall_time_s: float = 0.0
    meta: dict = field(default_factory=dict)

    def add(self, name: str, max_error: float, threshold: float, **extra) -> CheckResult:
        r = CheckResult(name, float(max_error), float(threshold), dict(extra))
        self.checks.append(r)
        return r

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_error(self) -> float:
        return max((c.max_error for c in self.checks), default=0.0)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "suite": self.suite,
            "seed": self.seed,
            "pass": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "wall_time_s": float(self.wall_time_s),
            "meta": self.meta,
        }


class Stopwatch:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        return False
