"""Random search for instances a candidate Telep simulator gets wrong."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from ..errors import InvalidInputError
from .distributions import telep_support
from .models import TelepInstance, TelepOutcome

logger = logging.getLogger(__name__)

TelepCandidate = Callable[[TelepInstance], TelepOutcome]


@dataclass
class FalsificationResult:
    seed: int
    trials_run: int
    counterexample: TelepInstance | None = None
    answer: TelepOutcome | None = None

    @property
    def refuted(self) -> bool:
        return self.counterexample is not None

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "seed": self.seed,
            "trials_run": self.trials_run,
            "refuted": self.refuted,
        }
        if self.counterexample is not None and self.answer is not None:
            payload["counterexample"] = self.counterexample.to_dict()
            payload["answer"] = self.answer.to_dict()
        return payload


def run_falsifier(
    candidate: TelepCandidate,
    trials: int,
    seed: int = 0,
    n: int | None = None,
    max_n: int = 8,
) -> FalsificationResult:
    """Query the candidate on uniformly random instances until it leaves the support.

    ``n`` fixes the instance length; circuit-backed candidates expose their own
    ``n``. Otherwise lengths are drawn from ``1..max_n``.
    """
    if trials < 0:
        raise InvalidInputError("trials must be non-negative")
    fixed_n = n if n is not None else getattr(candidate, "n", None)
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        length = fixed_n if fixed_n is not None else int(rng.integers(1, max_n + 1))
        instance = TelepInstance.from_codes(rng.integers(0, 24, size=length).tolist())
        answer = candidate(instance)
        if not telep_support(instance, answer):
            logger.info("candidate refuted after %d trials: %s", trial + 1, instance.to_dict())
            return FalsificationResult(seed, trial + 1, instance, answer)
    return FalsificationResult(seed, trials)


def falsify_simulator(
    candidate: TelepCandidate,
    trials: int,
    seed: int = 0,
    n: int | None = None,
) -> TelepInstance | None:
    return run_falsifier(candidate, trials, seed=seed, n=n).counterexample
