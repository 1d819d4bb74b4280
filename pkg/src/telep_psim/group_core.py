"""Exact algebra of the single-qubit Pauli and Clifford groups.

Cliffords are stored as conjugation tableaux (the signed images of X and Z), so
every protocol step is integer arithmetic. Matrices only exist as a cross-check
through :func:`clifford_matrix`.

Encodings:
    PauliLabel: I=0, X=1, Y=2, Z=3 (2 bits).
    Clifford1: pauli_index * 6 + coset_index (5 bits, codes 24-31 invalid), with
    the coset list ``I, H, S, HS, SHS, (HS)^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidEncodingError, InvalidInputError


class PauliLabel(IntEnum):
    I = 0
    X = 1
    Y = 2
    Z = 3

    @property
    def x_bit(self) -> int:
        return 1 if self in (PauliLabel.X, PauliLabel.Y) else 0

    @property
    def z_bit(self) -> int:
        return 1 if self in (PauliLabel.Y, PauliLabel.Z) else 0

    @classmethod
    def from_bits(cls, x_bit: int, z_bit: int) -> PauliLabel:
        return _LABEL_BY_BITS[(x_bit & 1, z_bit & 1)]

    @classmethod
    def parse(cls, value: str | int | PauliLabel) -> PauliLabel:
        if isinstance(value, PauliLabel):
            return value
        if isinstance(value, str):
            key = value.strip().upper()
            if key in cls.__members__:
                return cls[key]
            raise InvalidEncodingError(f"Unknown Pauli label: {value!r}")
        return decode_pauli(value)

    def __str__(self) -> str:
        return self.name


_LABEL_BY_BITS = {
    (0, 0): PauliLabel.I,
    (1, 0): PauliLabel.X,
    (1, 1): PauliLabel.Y,
    (0, 1): PauliLabel.Z,
}

NON_IDENTITY_LABELS = (PauliLabel.X, PauliLabel.Y, PauliLabel.Z)


@dataclass(frozen=True)
class SignedPauli1:
    """The operator ``i**phase_exp * X**x_bit * Z**z_bit``."""

    x_bit: int
    z_bit: int
    phase_exp: int = 0

    def __post_init__(self) -> None:
        if self.x_bit not in (0, 1) or self.z_bit not in (0, 1):
            raise InvalidInputError("Pauli bits must be 0 or 1")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    def __hash__(self) -> int:
        return _pack(self)

    @classmethod
    def from_label(cls, label: PauliLabel, sign: int = 1) -> SignedPauli1:
        """Hermitian operator ``sign * label`` (Y is the usual Hermitian Y)."""
        label = PauliLabel(label)
        offset = 0 if sign == 1 else 2
        return cls(label.x_bit, label.z_bit, label.x_bit * label.z_bit + offset)

    @property
    def label(self) -> PauliLabel:
        return PauliLabel.from_bits(self.x_bit, self.z_bit)

    @property
    def label_phase(self) -> int:
        """Exponent k with ``self == i**k * label`` for the Hermitian label matrix."""
        return (self.phase_exp - self.x_bit * self.z_bit) % 4

    @property
    def sign(self) -> int:
        if not self.is_hermitian():
            raise InvalidInputError(f"{self} is not Hermitian")
        return 1 if self.label_phase == 0 else -1

    def is_hermitian(self) -> bool:
        return (self.phase_exp - self.x_bit * self.z_bit) % 2 == 0

    def is_identity(self) -> bool:
        return self.x_bit == 0 and self.z_bit == 0

    def unsigned(self) -> SignedPauli1:
        return SignedPauli1.from_label(self.label)

    def commutes_with(self, other: SignedPauli1) -> bool:
        return (self.x_bit * other.z_bit + self.z_bit * other.x_bit) % 2 == 0

    def matrix(self) -> np.ndarray:
        return (1j**self.label_phase) * PAULI_MATRICES[self.label]

    def __str__(self) -> str:
        prefix = ("+", "+i", "-", "-i")[self.label_phase]
        return f"{prefix}{self.label.name}"


def pauli_mul(a: SignedPauli1, b: SignedPauli1) -> SignedPauli1:
    """Exact product ``a @ b``; moving Z^za past X^xb costs (-1)**(za*xb)."""
    phase = a.phase_exp + b.phase_exp + 2 * (a.z_bit * b.x_bit)
    return SignedPauli1(a.x_bit ^ b.x_bit, a.z_bit ^ b.z_bit, phase)


def pauli_product(paulis: Iterable[SignedPauli1]) -> SignedPauli1:
    """Left-to-right product of a sequence of Paulis."""
    result = PAULI_I
    for pauli in paulis:
        result = pauli_mul(result, pauli)
    return result


PAULI_I = SignedPauli1(0, 0, 0)
PAULI_X = SignedPauli1.from_label(PauliLabel.X)
PAULI_Y = SignedPauli1.from_label(PauliLabel.Y)
PAULI_Z = SignedPauli1.from_label(PauliLabel.Z)

PAULI_MATRICES = {
    PauliLabel.I: np.eye(2, dtype=complex),
    PauliLabel.X: np.array([[0, 1], [1, 0]], dtype=complex),
    PauliLabel.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    PauliLabel.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class S3Perm:
    """Permutation of {1, 2, 3}; ``images[i - 1]`` is the image of i.

    Symbols 1, 2, 3 stand for the X, Y and Z axes.
    """

    images: tuple[int, int, int] = (1, 2, 3)

    def __post_init__(self) -> None:
        if tuple(sorted(self.images)) != (1, 2, 3):
            raise InvalidInputError(f"Not a permutation of 1..3: {self.images}")

    @classmethod
    def from_cycles(cls, text: str) -> S3Perm:
        images = [1, 2, 3]
        for chunk in text.replace(")", " ").replace("(", " ").split():
            symbols = [int(ch) for ch in chunk]
            for pos, symbol in enumerate(symbols):
                images[symbol - 1] = symbols[(pos + 1) % len(symbols)]
        return cls(tuple(images))  # type: ignore[arg-type]

    def compose(self, other: S3Perm) -> S3Perm:
        """``self`` after ``other``."""
        return S3Perm(tuple(self.images[i - 1] for i in other.images))  # type: ignore[arg-type]

    def inverse(self) -> S3Perm:
        inverse = [0, 0, 0]
        for source, target in enumerate(self.images, start=1):
            inverse[target - 1] = source
        return S3Perm(tuple(inverse))  # type: ignore[arg-type]

    def apply(self, label: PauliLabel) -> PauliLabel:
        if label == PauliLabel.I:
            return label
        return PauliLabel(self.images[int(label) - 1])

    def is_identity(self) -> bool:
        return self.images == (1, 2, 3)

    def cycles(self) -> str:
        seen: set[int] = set()
        parts: list[str] = []
        for start in (1, 2, 3):
            if start in seen or self.images[start - 1] == start:
                continue
            cycle = [start]
            seen.add(start)
            current = self.images[start - 1]
            while current != start:
                cycle.append(current)
                seen.add(current)
                current = self.images[current - 1]
            parts.append("(" + "".join(str(symbol) for symbol in cycle) + ")")
        return "".join(parts) or "()"

    def __str__(self) -> str:
        return self.cycles()


@dataclass(frozen=True)
class Clifford1:
    """Single-qubit Clifford modulo global phase, as its conjugation tableau.

    Hashing and equality go through ``key``, the two images packed into 8 bits.
    """

    image_of_x: SignedPauli1
    image_of_z: SignedPauli1
    key: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        for image in (self.image_of_x, self.image_of_z):
            if not image.is_hermitian() or image.is_identity():
                raise InvalidInputError(f"Invalid tableau image: {image}")
        if self.image_of_x.commutes_with(self.image_of_z):
            raise InvalidInputError("Tableau images must anticommute")
        object.__setattr__(self, "key", _pack(self.image_of_x) << 4 | _pack(self.image_of_z))

    def __hash__(self) -> int:
        return self.key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Clifford1):
            return NotImplemented
        return self.key == other.key

    @property
    def code(self) -> int:
        return encode_clifford(self)

    def __str__(self) -> str:
        return CLIFFORD_NAMES.get(self, f"C{self.code}")


def _pack(p: SignedPauli1) -> int:
    return p.x_bit | p.z_bit << 1 | p.phase_exp << 2


@lru_cache(maxsize=None)
def conjugate_pauli(c: Clifford1, p: SignedPauli1) -> SignedPauli1:
    """``c p c^dagger`` with exact phase."""
    result = SignedPauli1(0, 0, p.phase_exp)
    if p.x_bit:
        result = pauli_mul(result, c.image_of_x)
    if p.z_bit:
        result = pauli_mul(result, c.image_of_z)
    return result


@lru_cache(maxsize=None)
def clifford_compose(c1: Clifford1, c2: Clifford1) -> Clifford1:
    """Tableau of ``c1 @ c2`` (c2 acts first)."""
    return Clifford1(
        conjugate_pauli(c1, c2.image_of_x),
        conjugate_pauli(c1, c2.image_of_z),
    )


def clifford_product(cliffords: Sequence[Clifford1]) -> Clifford1:
    """``C_L ... C_1`` for the sequence ``(C_1, ..., C_L)``."""
    result = IDENTITY
    for clifford in cliffords:
        result = clifford_compose(clifford, result)
    return result


def clifford_inverse(c: Clifford1) -> Clifford1:
    return _tables().inverses[c]


def transpose_pauli(p: SignedPauli1) -> SignedPauli1:
    # (X^x Z^z)^T = Z^z X^x = (-1)^(xz) X^x Z^z
    return SignedPauli1(p.x_bit, p.z_bit, p.phase_exp + 2 * p.x_bit * p.z_bit)


@lru_cache(maxsize=None)
def clifford_transpose(c: Clifford1) -> Clifford1:
    """Tableau of ``U^T``, using ``U^T P conj(U) = (U^dagger P^T U)^T``."""
    inverse = clifford_inverse(c)
    return Clifford1(
        transpose_pauli(conjugate_pauli(inverse, transpose_pauli(PAULI_X))),
        transpose_pauli(conjugate_pauli(inverse, transpose_pauli(PAULI_Z))),
    )


@lru_cache(maxsize=None)
def pauli_clifford(label: PauliLabel) -> Clifford1:
    """The Pauli ``label`` viewed as a Clifford."""
    sign_x = -1 if label in (PauliLabel.Y, PauliLabel.Z) else 1
    sign_z = -1 if label in (PauliLabel.X, PauliLabel.Y) else 1
    return Clifford1(
        SignedPauli1.from_label(PauliLabel.X, sign_x),
        SignedPauli1.from_label(PauliLabel.Z, sign_z),
    )


IDENTITY = Clifford1(PAULI_X, PAULI_Z)
HADAMARD = Clifford1(PAULI_Z, PAULI_X)
PHASE = Clifford1(PAULI_Y, PAULI_Z)

_LETTERS = {
    "I": IDENTITY,
    "H": HADAMARD,
    "S": PHASE,
    "X": pauli_clifford(PauliLabel.X),
    "Y": pauli_clifford(PauliLabel.Y),
    "Z": pauli_clifford(PauliLabel.Z),
}


def clifford_from_word(word: str) -> Clifford1:
    """Matrix-order word such as ``"SHS"``; the rightmost letter acts first."""
    result = IDENTITY
    for letter in reversed(word.strip().upper()):
        if letter not in _LETTERS:
            raise InvalidInputError(f"Unknown Clifford letter {letter!r} in {word!r}")
        result = clifford_compose(_LETTERS[letter], result)
    return result


COSET_WORDS = ("I", "H", "S", "HS", "SHS", "HSHS")
COSET_REPRESENTATIVES = tuple(clifford_from_word(word) for word in COSET_WORDS)


@dataclass(frozen=True)
class _GroupTables:
    elements: tuple[Clifford1, ...]
    codes: dict[Clifford1, int]
    inverses: dict[Clifford1, Clifford1]


@lru_cache(maxsize=1)
def _tables() -> _GroupTables:
    elements = tuple(
        clifford_compose(pauli_clifford(label), representative)
        for label in PauliLabel
        for representative in COSET_REPRESENTATIVES
    )
    codes = {element: code for code, element in enumerate(elements)}
    if len(codes) != 24:
        raise RuntimeError("Clifford enumeration is not injective")
    inverses = {}
    for element in elements:
        for candidate in elements:
            if clifford_compose(element, candidate) == IDENTITY:
                inverses[element] = candidate
                break
    return _GroupTables(elements=elements, codes=codes, inverses=inverses)


def all_cliffords() -> tuple[Clifford1, ...]:
    """All 24 elements in code order."""
    return _tables().elements


def encode_clifford(c: Clifford1) -> int:
    return _tables().codes[c]


def decode_clifford(code: int) -> Clifford1:
    if not isinstance(code, (int, np.integer)) or not 0 <= int(code) < 24:
        raise InvalidEncodingError(f"Clifford code out of range: {code!r}")
    return _tables().elements[int(code)]


def encode_pauli(label: PauliLabel) -> int:
    return int(label)


def decode_pauli(code: int) -> PauliLabel:
    if not isinstance(code, (int, np.integer)) or not 0 <= int(code) < 4:
        raise InvalidEncodingError(f"Pauli code out of range: {code!r}")
    return PauliLabel(int(code))


def canonical_decomposition(c: Clifford1) -> tuple[PauliLabel, int]:
    """``(pauli, coset_index)`` with ``c == pauli @ COSET_REPRESENTATIVES[coset_index]``."""
    return divmod_code(encode_clifford(c))


def divmod_code(code: int) -> tuple[PauliLabel, int]:
    pauli_index, coset_index = divmod(code, 6)
    return PauliLabel(pauli_index), coset_index


def pauli_part(c: Clifford1) -> PauliLabel | None:
    """The label of ``c`` when it lies in the Pauli subgroup, else None."""
    label, coset_index = canonical_decomposition(c)
    return label if coset_index == 0 else None


def quotient_s3(c: Clifford1) -> S3Perm:
    """Image in C/P = S3: how ``c`` permutes the unsigned X, Y, Z axes."""
    return S3Perm(
        tuple(
            int(conjugate_pauli(c, SignedPauli1.from_label(label)).label)
            for label in NON_IDENTITY_LABELS
        )  # type: ignore[arg-type]
    )


def clifford_order(c: Clifford1) -> int:
    power = c
    order = 1
    while power != IDENTITY:
        power = clifford_compose(c, power)
        order += 1
    return order


_H_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S_MATRIX = np.array([[1, 0], [0, 1j]], dtype=complex)
_LETTER_MATRICES = {
    "I": PAULI_MATRICES[PauliLabel.I],
    "H": _H_MATRIX,
    "S": _S_MATRIX,
}


def _word_matrix(word: str) -> np.ndarray:
    matrix = np.eye(2, dtype=complex)
    for letter in word:
        matrix = matrix @ _LETTER_MATRICES[letter]
    return matrix


_COSET_MATRICES = tuple(_word_matrix(word) for word in COSET_WORDS)


def clifford_matrix(c: Clifford1) -> np.ndarray:
    """A unitary representative of ``c``."""
    label, coset_index = canonical_decomposition(c)
    return PAULI_MATRICES[label] @ _COSET_MATRICES[coset_index]


CLIFFORD_NAMES: dict[Clifford1, str] = {
    representative: word for word, representative in zip(COSET_WORDS, COSET_REPRESENTATIVES)
}
CLIFFORD_NAMES.update(
    {pauli_clifford(label): label.name for label in NON_IDENTITY_LABELS}
)


def random_cliffords(rng: np.random.Generator, size: int) -> tuple[Clifford1, ...]:
    elements = _tables().elements
    return tuple(elements[int(code)] for code in rng.integers(0, 24, size=size))
