"""Uniform pass/fail records emitted by every check."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Optional


@dataclass
class CheckReport:
    check: str
    params: dict
    status: str
    witness: Optional[str] = None
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {"check": self.check, "params": self.params, "status": self.status,
                "witness": self.witness, "elapsed_ms": self.elapsed_ms}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text) -> "CheckReport":
        d = json.loads(text) if isinstance(text, str) else text
        return cls(d["check"], d["params"], d["status"], d.get("witness"), int(d.get("elapsed_ms", 0)))

    def __str__(self):
        s = f"[{self.status.upper()}] {self.check} {json.dumps(self.params, sort_keys=True)} ({self.elapsed_ms} ms)"
        if self.witness:
            s += f"\n    witness: {self.witness}"
        return s


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = int((time.perf_counter() - self.t0) * 1000)


def report(name: str, params: dict, witness: Optional[str], timer: Timer) -> CheckReport:
    return CheckReport(name, params, "fail" if witness else "pass", witness, timer.ms)
