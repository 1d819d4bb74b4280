"""Property check interfaces for the verification suite."""

from __future__ import annotations

import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..config import ToolkitConfig

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    valid: bool
    score: float
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "valid": self.valid,
            "score": self.score,
            "errors": list(self.errors),
            "warnings": list(self.warnings),
            "details": dict(self.details),
        }


def ratio_result(
    passed: int,
    total: int,
    errors: list[str],
    details: dict[str, Any] | None = None,
    warnings: list[str] | None = None,
) -> CheckResult:
    payload = {"passed": passed, "total": total}
    payload.update(details or {})
    return CheckResult(
        valid=not errors,
        score=passed / total if total else 1.0,
        errors=errors,
        warnings=list(warnings or []),
        details=payload,
    )


class PropertyCheck(ABC):
    """One named property, run against a configuration and a seed."""

    def __init__(self, name: str, criterion: int) -> None:
        self.name = name
        self.criterion = criterion

    @abstractmethod
    def run(self, config: ToolkitConfig, seed: int) -> CheckResult:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"


class CompositeCheck(PropertyCheck):
    """The suite: every check in criterion order, passing only when each one passes.

    ``details`` maps check names to their reports, each tagged with its criterion.
    """

    def __init__(self, checks: list[PropertyCheck]) -> None:
        super().__init__("suite", 0)
        self.checks = sorted(checks, key=lambda check: check.criterion)

    def run(self, config: ToolkitConfig, seed: int) -> CheckResult:
        if not self.checks:
            return CheckResult(valid=True, score=1.0, warnings=["No checks selected"])
        reports = {check.name: self._report(check, config, seed) for check in self.checks}
        failed = [name for name, report in reports.items() if not report["valid"]]
        if failed:
            logger.warning("Failed checks: %s", ", ".join(failed))
        return CheckResult(
            valid=not failed,
            score=float(np.mean([report["score"] for report in reports.values()])),
            errors=_prefixed(reports, "errors"),
            warnings=_prefixed(reports, "warnings"),
            details=reports,
        )

    @staticmethod
    def _report(check: PropertyCheck, config: ToolkitConfig, seed: int) -> dict[str, Any]:
        started = time.perf_counter()
        result = check.run(config, seed)
        logger.info(
            "[%d] %s %s in %.1fs (score %.4f)",
            check.criterion,
            check.name,
            "ok" if result.valid else "FAILED",
            time.perf_counter() - started,
            result.score,
        )
        return {"criterion": check.criterion, **result.to_dict()}


def _prefixed(reports: dict[str, dict[str, Any]], key: str) -> list[str]:
    return [f"{name}: {message}" for name, report in reports.items() for message in report[key]]
