"""Report object returned by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PropertyViolation


@dataclass
class ValidationReport:
    """Outcome of a check: ``passed`` plus named measurements.

    Truthy iff the check passed.  :meth:`require` turns a failed report into a
    :class:`PropertyViolation`.
    """

    passed: bool
    measures: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    detail: str = ""

    def __bool__(self):
        return self.passed

    def require(self) -> "ValidationReport":
        if not self.passed:
            raise PropertyViolation(self.detail or f"check failed: {self.measures}")
        return self
