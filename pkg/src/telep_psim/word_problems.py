"""PARITY, MOD_3 and general C/P word problems solved through stabilizer learning.

A bit string is encoded as a Clifford sequence whose product lands in a coset
that encodes the answer; the learned stabilizer pair of
``(I (x) product)|Phi>`` then identifies that coset. Decisions only ever look
at unsigned stabilizers.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Sequence

import numpy as np

from .bell_states import SignedPauli2, state_of, weight2_stabilizers
from .errors import InvalidInputError, PromiseViolationError
from .group_core import (
    HADAMARD,
    IDENTITY,
    Clifford1,
    S3Perm,
    clifford_from_word,
    clifford_product,
    decode_clifford,
    quotient_s3,
)
from .tomography import PCliffOracleFn, learn_stabilizer_pair

logger = logging.getLogger(__name__)

S_EVEN = frozenset(SignedPauli2.parse(label) for label in ("XX", "ZZ", "YY"))
S_ODD = frozenset(SignedPauli2.parse(label) for label in ("XZ", "ZX", "YY"))

SH = clifford_from_word("SH")


def parse_bits(bits: str | Sequence[int]) -> tuple[int, ...]:
    if isinstance(bits, str):
        text = bits.strip()
        if not set(text) <= {"0", "1"}:
            raise InvalidInputError(f"Bit string may only contain 0 and 1: {bits!r}")
        values = tuple(int(ch) for ch in text)
    else:
        values = tuple(bits)
    if not values:
        raise InvalidInputError("Bit string must be non-empty")
    if any(value not in (0, 1) for value in values):
        raise InvalidInputError(f"Bit string may only contain 0 and 1: {bits!r}")
    return values


def encode_parity(bits: str | Sequence[int]) -> tuple[Clifford1, ...]:
    return tuple(HADAMARD if bit else IDENTITY for bit in parse_bits(bits))


def encode_mod3(bits: str | Sequence[int]) -> tuple[Clifford1, ...]:
    return tuple(SH if bit else IDENTITY for bit in parse_bits(bits))


def _check_pair(s1: SignedPauli2, s2: SignedPauli2) -> tuple[SignedPauli2, SignedPauli2]:
    s1, s2 = s1.unsigned(), s2.unsigned()
    if s1 == s2:
        raise InvalidInputError(f"Stabilizers must be distinct, got {s1.key()} twice")
    if s1.weight != 2 or s2.weight != 2:
        raise InvalidInputError(f"Stabilizers must have weight 2: {s1.key()}, {s2.key()}")
    return s1, s2


def decide_parity(s1: SignedPauli2, s2: SignedPauli2) -> int:
    pair = set(_check_pair(s1, s2))
    if pair <= S_EVEN:
        return 0
    if pair <= S_ODD:
        return 1
    raise InvalidInputError(
        f"{s1.key()}, {s2.key()} are not both stabilizers of an even or odd state"
    )


def solve_parity(
    oracle: PCliffOracleFn,
    bits: str | Sequence[int],
    budget: int = 64,
    rng: np.random.Generator | int = 0,
) -> int:
    pair = learn_stabilizer_pair(oracle, encode_parity(bits), budget=budget, rng=rng)
    return decide_parity(*pair)


def mod3_reference_sets() -> tuple[frozenset[SignedPauli2], ...]:
    """Unsigned weight-2 stabilizers of ``(I (x) (SH)^t)|Phi>`` for t = 0, 1, 2."""
    power = IDENTITY
    sets = []
    for _ in range(3):
        sets.append(weight2_stabilizers(state_of(power)))
        power = clifford_product((power, SH))
    return tuple(sets)


def decide_mod3(s1: SignedPauli2, s2: SignedPauli2) -> int:
    pair = set(_check_pair(s1, s2))
    matches = [t for t, reference in enumerate(mod3_reference_sets()) if pair <= reference]
    if len(matches) != 1:
        raise InvalidInputError(
            f"{s1.key()}, {s2.key()} match {len(matches)} of the (SH)^t stabilizer sets"
        )
    return matches[0]


def solve_mod3(
    oracle: PCliffOracleFn,
    bits: str | Sequence[int],
    budget: int = 64,
    rng: np.random.Generator | int = 0,
) -> int:
    pair = learn_stabilizer_pair(oracle, encode_mod3(bits), budget=budget, rng=rng)
    return decide_mod3(*pair)


def learned_coset(s1: SignedPauli2, s2: SignedPauli2) -> S3Perm:
    """The C/P element of the product, read off two of its stabilizers.

    The stabilizers of ``(I (x) C)|Phi>`` are ``P (x) sigma(P)`` up to sign, where
    sigma is the axis permutation of C.
    """
    s1, s2 = _check_pair(s1, s2)
    if s1.left == s2.left or s1.right == s2.right:
        raise InvalidInputError(f"{s1.key()}, {s2.key()} are not stabilizers of one state")
    images = {int(s1.left): int(s1.right), int(s2.left): int(s2.right)}
    (missing_source,) = {1, 2, 3} - set(images)
    (missing_target,) = {1, 2, 3} - set(images.values())
    images[missing_source] = missing_target
    return S3Perm((images[1], images[2], images[3]))


class WordProblemAnswer(str, Enum):
    IDENTITY = "identity"
    TARGET = "target"


@dataclass(frozen=True)
class WordProblemInstance:
    """Promise: the product of ``sequence`` lies in the identity coset or the target's."""

    sequence: tuple[Clifford1, ...]
    target: Clifford1

    def __post_init__(self) -> None:
        object.__setattr__(self, "sequence", tuple(self.sequence))
        if not self.sequence:
            raise InvalidInputError("Word problem needs a non-empty sequence")
        if quotient_s3(self.target).is_identity():
            raise InvalidInputError(f"Target {self.target} lies in the Pauli subgroup")

    def product_coset(self) -> S3Perm:
        return quotient_s3(clifford_product(self.sequence))

    def promise_holds(self) -> bool:
        coset = self.product_coset()
        return coset.is_identity() or coset == quotient_s3(self.target)

    def to_dict(self) -> dict[str, Any]:
        return {"sequence": [c.code for c in self.sequence], "target": self.target.code}

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> WordProblemInstance:
        if "sequence" not in payload or "target" not in payload:
            raise InvalidInputError("Word problem needs 'sequence' and 'target'")
        return cls(
            tuple(decode_clifford(int(code)) for code in payload["sequence"]),
            decode_clifford(int(payload["target"])),
        )


def solve_word_problem(
    oracle: PCliffOracleFn,
    wp: WordProblemInstance,
    budget: int = 64,
    rng: np.random.Generator | int = 0,
) -> WordProblemAnswer:
    pair = set(_check_pair(*learn_stabilizer_pair(oracle, wp.sequence, budget=budget, rng=rng)))
    if pair <= weight2_stabilizers(state_of(IDENTITY)):
        return WordProblemAnswer.IDENTITY
    if pair <= weight2_stabilizers(state_of(wp.target)):
        return WordProblemAnswer.TARGET
    keys = sorted(p.key() for p in pair)
    logger.warning("learned stabilizers %s violate the word-problem promise", keys)
    raise PromiseViolationError(
        f"Learned stabilizers {keys} fit neither the identity "
        f"nor the target coset {quotient_s3(wp.target)}"
    )
