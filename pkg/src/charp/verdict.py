"""Three-valued verdicts with re-checkable certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

ZERO = "Zero"
NONZERO = "NonZero"
UNKNOWN = "Unknown"


@dataclass
class Verdict:
    status: str
    reason: str = ""
    certificate: dict[str, Any] = field(default_factory=dict)

    @property
    def is_zero(self) -> bool:
        return self.status == ZERO

    @property
    def is_nonzero(self) -> bool:
        return self.status == NONZERO

    @property
    def is_unknown(self) -> bool:
        return self.status == UNKNOWN

    def __str__(self):
        return self.status

    def to_json(self) -> dict:
        return {"status": self.status, "reason": self.reason,
                "certificate": _jsonable(self.certificate)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Verdict):
        return obj.to_json()
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if hasattr(obj, "to_json"):
        return _jsonable(obj.to_json())
    return str(obj)


def zero(reason: str = "", **cert) -> Verdict:
    return Verdict(ZERO, reason, cert)


def nonzero(reason: str = "", **cert) -> Verdict:
    return Verdict(NONZERO, reason, cert)


def unknown(reason: str = "", **cert) -> Verdict:
    return Verdict(UNKNOWN, reason, cert)
