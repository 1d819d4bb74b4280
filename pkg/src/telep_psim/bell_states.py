"""Stabilizer description of the states (I (x) C)|Phi> and rotated Bell bases.

States are carried as two commuting generators. Nothing here touches amplitudes;
the dense path lives in :mod:`telep_psim.circuits.statevector`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import InvalidInputError
from .group_core import (
    IDENTITY,
    NON_IDENTITY_LABELS,
    PAULI_X,
    PAULI_Z,
    Clifford1,
    PauliLabel,
    SignedPauli1,
    clifford_compose,
    clifford_inverse,
    clifford_transpose,
    conjugate_pauli,
    pauli_clifford,
    pauli_mul,
)


@dataclass(frozen=True)
class SignedPauli2:
    """``i**phase_exp * left (x) right`` with Hermitian single-qubit factors."""

    left: PauliLabel
    right: PauliLabel
    phase_exp: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "left", PauliLabel(self.left))
        object.__setattr__(self, "right", PauliLabel(self.right))
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @classmethod
    def from_factors(cls, left: SignedPauli1, right: SignedPauli1) -> SignedPauli2:
        return cls(left.label, right.label, left.label_phase + right.label_phase)

    @classmethod
    def parse(cls, text: str) -> SignedPauli2:
        """Parse strings such as ``"XY"``, ``"-YY"`` or ``"+Z(x)X"``."""
        body = text.strip().replace("(x)", "").replace("⊗", "")
        phase = 0
        if body.startswith("-"):
            phase, body = 2, body[1:]
        elif body.startswith("+"):
            body = body[1:]
        if len(body) != 2:
            raise InvalidInputError(f"Expected two Pauli letters, got {text!r}")
        return cls(PauliLabel.parse(body[0]), PauliLabel.parse(body[1]), phase)

    @property
    def weight(self) -> int:
        return int(self.left != PauliLabel.I) + int(self.right != PauliLabel.I)

    @property
    def sign(self) -> int:
        if not self.is_hermitian():
            raise InvalidInputError(f"{self} is not Hermitian")
        return 1 if self.phase_exp == 0 else -1

    def is_hermitian(self) -> bool:
        return self.phase_exp % 2 == 0

    def unsigned(self) -> SignedPauli2:
        return SignedPauli2(self.left, self.right, 0)

    def factors(self) -> tuple[SignedPauli1, SignedPauli1]:
        """Split into factors, putting the whole phase on the left one."""
        left = SignedPauli1.from_label(self.left)
        left = SignedPauli1(left.x_bit, left.z_bit, left.phase_exp + self.phase_exp)
        return left, SignedPauli1.from_label(self.right)

    def commutes_with(self, other: SignedPauli2) -> bool:
        anticommuting = 0
        for mine, theirs in ((self.left, other.left), (self.right, other.right)):
            if not SignedPauli1.from_label(mine).commutes_with(SignedPauli1.from_label(theirs)):
                anticommuting += 1
        return anticommuting % 2 == 0

    def key(self) -> str:
        return f"{self.left.name}{self.right.name}"

    def __str__(self) -> str:
        prefix = ("+", "+i", "-", "-i")[self.phase_exp]
        return f"{prefix}{self.key()}"


def pauli2_mul(a: SignedPauli2, b: SignedPauli2) -> SignedPauli2:
    a_left, a_right = a.factors()
    b_left, b_right = b.factors()
    return SignedPauli2.from_factors(pauli_mul(a_left, b_left), pauli_mul(a_right, b_right))


def conjugate_pair(left: Clifford1, right: Clifford1, p: SignedPauli2) -> SignedPauli2:
    """``(left (x) right) p (left (x) right)^dagger``."""
    p_left, p_right = p.factors()
    return SignedPauli2.from_factors(conjugate_pauli(left, p_left), conjugate_pauli(right, p_right))


IDENTITY2 = SignedPauli2(PauliLabel.I, PauliLabel.I)

WEIGHT2_PAIRS: tuple[SignedPauli2, ...] = tuple(
    SignedPauli2(left, right) for left, right in product(NON_IDENTITY_LABELS, repeat=2)
)


@dataclass(frozen=True)
class StabilizerPair:
    gen1: SignedPauli2
    gen2: SignedPauli2

    def __post_init__(self) -> None:
        for gen in (self.gen1, self.gen2):
            if not gen.is_hermitian() or gen.unsigned() == IDENTITY2:
                raise InvalidInputError(f"Invalid stabilizer generator: {gen}")
        if self.gen1.unsigned() == self.gen2.unsigned():
            raise InvalidInputError("Stabilizer generators must be independent")
        if not self.gen1.commutes_with(self.gen2):
            raise InvalidInputError("Stabilizer generators must commute")

    def group_elements(self) -> tuple[SignedPauli2, ...]:
        return (IDENTITY2, self.gen1, self.gen2, pauli2_mul(self.gen1, self.gen2))

    def unsigned_stabilizers(self) -> frozenset[SignedPauli2]:
        """The three non-identity stabilizers with signs dropped."""
        return frozenset(element.unsigned() for element in self.group_elements()[1:])

    def to_dict(self) -> dict[str, str]:
        return {"gen1": str(self.gen1), "gen2": str(self.gen2)}


def state_of(c: Clifford1) -> StabilizerPair:
    """Generators of ``(I (x) c)|Phi>``: ``X (x) cXc^dagger`` and ``Z (x) cZc^dagger``."""
    return StabilizerPair(
        SignedPauli2.from_factors(PAULI_X, conjugate_pauli(c, PAULI_X)),
        SignedPauli2.from_factors(PAULI_Z, conjugate_pauli(c, PAULI_Z)),
    )


def pauli_twisted(state: StabilizerPair, label: PauliLabel) -> StabilizerPair:
    """The state ``(I (x) Q)|psi>`` for ``Q = label``."""
    twist = pauli_clifford(label)
    return StabilizerPair(
        conjugate_pair(IDENTITY, twist, state.gen1),
        conjugate_pair(IDENTITY, twist, state.gen2),
    )


def expectation(state: StabilizerPair, obs: SignedPauli2) -> int:
    if not obs.is_hermitian():
        raise InvalidInputError(f"Observable {obs} is not Hermitian")
    if not (obs.commutes_with(state.gen1) and obs.commutes_with(state.gen2)):
        return 0
    for element in state.group_elements():
        if element.left == obs.left and element.right == obs.right:
            return 1 if element.phase_exp == obs.phase_exp else -1
    raise RuntimeError(f"{obs} commutes with {state} but is not in its group")


def weight2_nonstabilizers(state: StabilizerPair) -> frozenset[SignedPauli2]:
    return frozenset(pair for pair in WEIGHT2_PAIRS if expectation(state, pair) == 0)


def weight2_stabilizers(state: StabilizerPair) -> frozenset[SignedPauli2]:
    return frozenset(pair for pair in WEIGHT2_PAIRS if expectation(state, pair) != 0)


@dataclass(frozen=True)
class BellBasisRotation:
    """Local rotation ``D_A (x) D_B`` of the Bell basis and its one-sided form ``d``.

    ``d = (d_b d_a^T)^dagger`` so that measuring in ``(I (x) d^dagger)`` applied to
    the Bell basis is the same measurement as in ``(d_a (x) d_b)`` applied to it.
    """

    d_a: Clifford1
    d_b: Clifford1
    d: Clifford1

    def __post_init__(self) -> None:
        if self.d != one_sided_rotation(self.d_a, self.d_b):
            raise InvalidInputError("d must equal (d_b d_a^T)^dagger")

    @classmethod
    def from_pair(cls, d_a: Clifford1, d_b: Clifford1) -> BellBasisRotation:
        return cls(d_a=d_a, d_b=d_b, d=one_sided_rotation(d_a, d_b))

    def to_dict(self) -> dict[str, int]:
        return {"d_a": self.d_a.code, "d_b": self.d_b.code, "d": self.d.code}


def one_sided_rotation(d_a: Clifford1, d_b: Clifford1) -> Clifford1:
    return clifford_inverse(clifford_compose(d_b, clifford_transpose(d_a)))


def rotation_equivalence(rot: BellBasisRotation, bell_outcome: PauliLabel) -> PauliLabel:
    """Relabel outcome ``P`` of the one-sided measurement as ``P' = D_A^T P (D_A^T)^dagger``."""
    relabeled = conjugate_pauli(clifford_transpose(rot.d_a), SignedPauli1.from_label(bell_outcome))
    return relabeled.label
