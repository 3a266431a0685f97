"""Machine-readable reports."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

from . import __version__

PASS, FAIL, REPORTED = "pass", "fail", "reported"


@dataclass
class Check:
    name: str
    anchor: str
    computed: Any
    expected: Any = None
    ms: int = 0

    @property
    def status(self) -> str:
        if self.expected is None:
            return REPORTED
        return PASS if self.computed == self.expected else FAIL

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "computed": self.computed,
            "expected": self.expected,
            "ms": self.ms,
        }


@dataclass
class Report:
    command: str
    params: dict
    checks: list[Check] = field(default_factory=list)
    cache_hits: int = 0
    cache_misses: int = 0

    def add(self, name: str, anchor: str, computed: Any, expected: Any = None, ms: int = 0) -> Check:
        c = Check(name, anchor, computed, expected, ms)
        self.checks.append(c)
        return c

    @contextmanager
    def timed(self, name: str, anchor: str, expected: Any = None):
        """Record a check whose computed value is set on the yielded dict as ``box['value']``."""
        box: dict = {}
        t0 = time.perf_counter()
        yield box
        ms = int((time.perf_counter() - t0) * 1000)
        self.add(name, anchor, box.get("value"), expected, ms)

    def extend(self, checks: list[Check]):
        self.checks.extend(checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "checks": [c.as_dict() for c in self.checks],
            "version": __version__,
            "cache": {"hits": self.cache_hits, "misses": self.cache_misses},
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)


def strip_timings(report: dict) -> dict:
    out = dict(report)
    out["checks"] = [{k: v for k, v in c.items() if k != "ms"} for c in report["checks"]]
    return out
