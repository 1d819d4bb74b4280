"""Possibilistic oracles for Telep_n and CliffP(Q)_L.

An oracle is a deterministic function from instances to outcomes. Randomized
oracles derive per-instance randomness from ``(seed, instance codes)`` and
memoize, so repeated or concurrent queries always agree.
"""

from __future__ import annotations

import json
import logging
import threading
from abc import ABC, abstractmethod
from pathlib import Path
from typing import TYPE_CHECKING, Any, Generic, TypeVar

import numpy as np

from ..errors import InvalidInputError, LengthMismatchError, OracleContractError
from ..group_core import PauliLabel, decode_pauli, encode_clifford
from .distributions import (
    last_factor_weights,
    most_likely_telep_outcome,
    pcliff_support,
    pcliff_weights,
    sample_telep_outcome,
    telep_prefix_product,
    telep_support,
)
from .models import (
    CorrectionFn,
    PCliffInstance,
    TelepInstance,
    TelepOutcome,
    identity_correction,
    instance_digest,
)

if TYPE_CHECKING:
    from ..lightcone.block_circuit import BlockCircuit

logger = logging.getLogger(__name__)

InstanceT = TypeVar("InstanceT")
AnswerT = TypeVar("AnswerT")

ADVERSARIAL_STRATEGIES = ("hashed", "least", "greatest")


def instance_rng(seed: int, codes: tuple[int, ...]) -> np.random.Generator:
    return np.random.default_rng(instance_digest(seed, codes))


class PossibilisticOracle(ABC, Generic[InstanceT, AnswerT]):
    """Deterministic query -> answer map with thread-safe memoization.

    Answers must be a pure function of the instance; the cache only saves work
    and is trimmed oldest-first past ``max_cache_size`` entries.
    """

    kind = "telep"
    max_cache_size = 65536

    def __init__(self, name: str) -> None:
        self.name = name
        self._cache: dict[InstanceT, AnswerT] = {}
        self._lock = threading.Lock()

    @abstractmethod
    def answer(self, instance: InstanceT) -> AnswerT:
        raise NotImplementedError

    def __call__(self, instance: InstanceT) -> AnswerT:
        with self._lock:
            cached = self._cache.get(instance)
        if cached is not None:
            return cached
        result = self.answer(instance)
        with self._lock:
            result = self._cache.setdefault(instance, result)
            if len(self._cache) > self.max_cache_size:
                self._cache.pop(next(iter(self._cache)))
        logger.debug("%s answered %s", self.name, result)
        return result

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"


class HonestTelepOracle(PossibilisticOracle[TelepInstance, TelepOutcome]):
    """Max-probability answers, or Born samples frozen per instance when seeded."""

    def __init__(self, seed: int | None = None) -> None:
        super().__init__("honest-telep" if seed is None else f"honest-telep-{seed}")
        self.seed = seed

    def answer(self, instance: TelepInstance) -> TelepOutcome:
        if self.seed is None:
            return most_likely_telep_outcome(instance)
        return sample_telep_outcome(instance, instance_rng(self.seed, instance.codes()))


class AdversarialTelepOracle(PossibilisticOracle[TelepInstance, TelepOutcome]):
    """Support-consistent answers picked by a seeded strategy."""

    def __init__(self, strategy_seed: int = 0, strategy: str = "hashed") -> None:
        if strategy not in ADVERSARIAL_STRATEGIES:
            raise InvalidInputError(f"Unknown strategy {strategy!r}")
        super().__init__(f"adversarial-telep-{strategy}-{strategy_seed}")
        self.strategy_seed = strategy_seed
        self.strategy = strategy

    def answer(self, instance: TelepInstance) -> TelepOutcome:
        rng = instance_rng(self.strategy_seed, instance.codes())
        if self.strategy == "least":
            prefix = (PauliLabel.I,) * (instance.n - 1)
        elif self.strategy == "greatest":
            prefix = (PauliLabel.Z,) * (instance.n - 1)
        else:
            prefix = tuple(PauliLabel(int(c)) for c in rng.integers(0, 4, size=instance.n - 1))
        weights = last_factor_weights(telep_prefix_product(instance, prefix))
        support = [label for label in PauliLabel if weights[label] > 0]
        draw = int(rng.integers(0, 1 << 62))
        return TelepOutcome(prefix + (_pick(support, self.strategy, draw),))


def _pick(support: list[PauliLabel], strategy: str, draw: int) -> PauliLabel:
    if strategy == "least":
        return support[0]
    if strategy == "greatest":
        return support[-1]
    return support[draw % len(support)]


class HonestPCliffOracle(PossibilisticOracle[PCliffInstance, PauliLabel]):
    kind = "pcliff"

    def __init__(self, correction: CorrectionFn = identity_correction, seed: int | None = None) -> None:
        super().__init__("honest-pcliff" if seed is None else f"honest-pcliff-{seed}")
        self.correction = correction
        self.seed = seed

    def answer(self, instance: PCliffInstance) -> PauliLabel:
        weights = pcliff_weights(self.correction, instance)
        if self.seed is None:
            return max(PauliLabel, key=weights.__getitem__)
        # weights sum to 4, so a uniform residue mod 4 is an exact Born sample
        threshold = instance_digest(self.seed, instance.codes()) % 4
        for label in PauliLabel:
            threshold -= weights[label]
            if threshold < 0:
                return label
        raise RuntimeError(f"Outcome weights of {instance} do not sum to 4")


class AdversarialPCliffOracle(PossibilisticOracle[PCliffInstance, PauliLabel]):
    kind = "pcliff"

    def __init__(
        self,
        correction: CorrectionFn = identity_correction,
        strategy_seed: int = 0,
        strategy: str = "hashed",
    ) -> None:
        if strategy not in ADVERSARIAL_STRATEGIES:
            raise InvalidInputError(f"Unknown strategy {strategy!r}")
        super().__init__(f"adversarial-pcliff-{strategy}-{strategy_seed}")
        self.correction = correction
        self.strategy_seed = strategy_seed
        self.strategy = strategy

    def answer(self, instance: PCliffInstance) -> PauliLabel:
        weights = pcliff_weights(self.correction, instance)
        support = [label for label in PauliLabel if weights[label]]
        return _pick(support, self.strategy, instance_digest(self.strategy_seed, instance.codes()))


class ConstantTelepOracle(PossibilisticOracle[TelepInstance, TelepOutcome]):
    """Always answers ``(label, ..., label)``; a deliberately wrong candidate."""

    def __init__(self, label: PauliLabel = PauliLabel.I) -> None:
        super().__init__(f"constant-{PauliLabel(label).name}")
        self.label = PauliLabel(label)

    def answer(self, instance: TelepInstance) -> TelepOutcome:
        return TelepOutcome((self.label,) * instance.n)


class TableOracle(PossibilisticOracle[Any, Any]):
    """Answers read from an external JSON table keyed by comma-joined codes.

    Telep keys list ``C_0..C_{n-1}``; pcliff keys list ``C_1..C_L`` then ``D``.
    """

    def __init__(self, kind: str, entries: dict[tuple[int, ...], Any], name: str = "table") -> None:
        if kind not in ("telep", "pcliff"):
            raise InvalidInputError(f"Unknown oracle kind {kind!r}")
        super().__init__(name)
        self.kind = kind
        self.entries = entries

    def answer(self, instance: Any) -> Any:
        key = instance.codes()
        if key not in self.entries:
            raise OracleContractError(
                f"Table oracle has no entry for {','.join(map(str, key))}",
                instance=instance,
            )
        return self.entries[key]

    @classmethod
    def from_dict(cls, payload: dict[str, Any], name: str = "table") -> TableOracle:
        kind = payload.get("kind", "pcliff")
        entries: dict[tuple[int, ...], Any] = {}
        for raw_key, value in payload.get("entries", {}).items():
            key = tuple(int(part) for part in str(raw_key).split(","))
            if kind == "telep":
                entries[key] = TelepOutcome(tuple(decode_pauli(int(v)) for v in value))
            else:
                entries[key] = decode_pauli(int(value))
        return cls(kind, entries, name=name)

    @classmethod
    def load(cls, path: Path) -> TableOracle:
        payload = json.loads(path.read_text(encoding="utf-8"))
        return cls.from_dict(payload, name=f"table:{path.name}")


class CircuitTelepOracle(PossibilisticOracle[TelepInstance, TelepOutcome]):
    """A block circuit (5-bit Clifford blocks in, 2-bit Pauli blocks out) used as a simulator."""

    def __init__(self, circuit: BlockCircuit, name: str = "circuit") -> None:
        if circuit.k != 5 or circuit.r != 2 or circuit.s != circuit.n:
            raise InvalidInputError("Telep simulator circuits need k=5, r=2 and s=n")
        super().__init__(name)
        self.circuit = circuit

    @property
    def n(self) -> int:
        return self.circuit.n

    def answer(self, instance: TelepInstance) -> TelepOutcome:
        if instance.n != self.circuit.n:
            raise LengthMismatchError(
                f"Circuit simulates n={self.circuit.n}, instance has n={instance.n}"
            )
        blocks = self.circuit.evaluate_blocks([encode_clifford(c) for c in instance.cliffords])
        return TelepOutcome(tuple(PauliLabel(value) for value in blocks))


class CountingOracle(PossibilisticOracle[Any, Any]):
    """Counts queries made to a wrapped oracle; repeated queries still count."""

    def __init__(self, inner: PossibilisticOracle[Any, Any]) -> None:
        super().__init__(f"counting({inner.name})")
        self.inner = inner
        self.kind = inner.kind
        self.queries = 0

    def answer(self, instance: Any) -> Any:
        return self.inner(instance)

    def __call__(self, instance: Any) -> Any:
        with self._lock:
            self.queries += 1
        return self.inner(instance)


class SupportCheckedOracle(PossibilisticOracle[Any, Any]):
    """Raises :class:`OracleContractError` when the wrapped oracle leaves the support."""

    def __init__(
        self, inner: PossibilisticOracle[Any, Any], correction: CorrectionFn | None = None
    ) -> None:
        super().__init__(f"checked({inner.name})")
        self.inner = inner
        self.kind = inner.kind
        self.correction = correction or identity_correction

    def answer(self, instance: Any) -> Any:
        result = self.inner(instance)
        if self.kind == "telep":
            ok = telep_support(instance, result)
        else:
            ok = pcliff_support(self.correction, instance, result)
        if not ok:
            logger.warning("%s answered outside support: %s", self.inner.name, result)
            raise OracleContractError(
                f"{self.inner.name} answered {result} outside the support",
                instance=instance,
                answer=result,
            )
        return result


def honest_oracle(
    kind: str, seed: int | None = None, correction: CorrectionFn | None = None
) -> PossibilisticOracle[Any, Any]:
    if kind == "telep":
        return HonestTelepOracle(seed=seed)
    if kind == "pcliff":
        return HonestPCliffOracle(correction=correction or identity_correction, seed=seed)
    raise InvalidInputError(f"Unknown oracle kind {kind!r}")


def adversarial_oracle(
    kind: str,
    strategy_seed: int = 0,
    correction: CorrectionFn | None = None,
    strategy: str = "hashed",
) -> PossibilisticOracle[Any, Any]:
    if kind == "telep":
        return AdversarialTelepOracle(strategy_seed=strategy_seed, strategy=strategy)
    if kind == "pcliff":
        return AdversarialPCliffOracle(
            correction=correction or identity_correction,
            strategy_seed=strategy_seed,
            strategy=strategy,
        )
    raise InvalidInputError(f"Unknown oracle kind {kind!r}")
