"""Verification report record and deterministic max-reduction helpers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

from . import __version__

SCHEMA_ID = "gaussseq.report/1"


@dataclass
class VerificationReport:
    """Outcome of one bound check.

    ``passed`` is true iff ``observed_max < bound_value`` (strict).
    ``wall_time`` is kept on the object but left out of the canonical file
    so that reruns are byte-identical.
    """

    target: str
    params: dict[str, Any]
    bound_name: str
    bound_value: float
    observed_max: float
    witness: dict[str, Any] | None
    extra: dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0
    version: str = __version__

    @property
    def passed(self) -> bool:
        return self.observed_max < self.bound_value

    def to_dict(self, include_timing: bool = False) -> dict[str, Any]:
        d = {
            "schema": SCHEMA_ID,
            "target": self.target,
            "params": self.params,
            "bound_name": self.bound_name,
            "bound_value": self.bound_value,
            "observed_max": self.observed_max,
            "witness": self.witness,
            "pass": self.passed,
            "extra": self.extra,
            "version": self.version,
        }
        if include_timing:
            d["wall_time"] = self.wall_time
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "VerificationReport":
        if d.get("schema") != SCHEMA_ID:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        return cls(
            target=d["target"],
            params=d["params"],
            bound_name=d["bound_name"],
            bound_value=d["bound_value"],
            observed_max=d["observed_max"],
            witness=d["witness"],
            extra=d.get("extra", {}),
            wall_time=d.get("wall_time", 0.0),
            version=d["version"],
        )


def best_of(candidates: Iterable[tuple[float, tuple]]) -> tuple[float, tuple] | None:
    """Largest value; exact ties go to the smallest key."""
    best = None
    for value, key in candidates:
        if best is None or value > best[0] or (value == best[0] and key < best[1]):
            best = (value, key)
    return best
