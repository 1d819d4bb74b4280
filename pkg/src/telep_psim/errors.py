"""Exception hierarchy for telep_psim.

Every error carries the exit code the CLI reports for it.
"""

from __future__ import annotations

from typing import Any


class TelepPsimError(Exception):
    exit_code = 1
    kind = "error"

    def to_dict(self) -> dict[str, Any]:
        return {"error": self.kind, "message": str(self), "exit_code": self.exit_code}


class InvalidInputError(TelepPsimError, ValueError):
    kind = "invalid_input"


class InvalidEncodingError(InvalidInputError):
    kind = "invalid_encoding"


class LengthMismatchError(InvalidInputError):
    kind = "length_mismatch"


class SizeLimitError(InvalidInputError):
    kind = "size_limit"


class NoValidIndexError(InvalidInputError):
    kind = "no_valid_index"


class PromiseViolationError(InvalidInputError):
    kind = "promise_violation"


class OracleContractError(TelepPsimError):
    """An oracle answered outside the support of the circuit it claims to simulate."""

    exit_code = 2
    kind = "contract_violation"

    def __init__(self, message: str, instance: Any = None, answer: Any = None) -> None:
        super().__init__(message)
        self.instance = instance
        self.answer = answer


class BudgetExhaustedError(TelepPsimError):
    exit_code = 3
    kind = "budget_exhausted"

    def __init__(self, message: str, partial: Any = (), budget: int = 0) -> None:
        super().__init__(message)
        self.partial = tuple(partial)
        self.budget = budget

    def to_dict(self) -> dict[str, Any]:
        payload = super().to_dict()
        payload["budget"] = self.budget
        payload["partial"] = [str(item) for item in self.partial]
        return payload
