"""Possibilistic stabilizer tomography of ``(I (x) C_L ... C_1)|Phi>``.

A deterministic CliffP(Q)_L oracle answers Bell measurements of the state in
six rotated bases, one per line of the magic square. Row and column readings
cannot agree everywhere, and any entry where they disagree is a
non-stabilizer. Randomizing the Clifford sequence and the Bell frame turns this
into a uniform sampler over the six weight-2 non-stabilizers, whose complement
gives the stabilizers up to sign.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from typing import Any, Callable, Sequence

import numpy as np

from .bell_states import (
    IDENTITY2,
    WEIGHT2_PAIRS,
    BellBasisRotation,
    SignedPauli2,
    conjugate_pair,
    pauli2_mul,
    rotation_equivalence,
)
from .circuits.distributions import pcliff_support
from .circuits.models import CorrectionFn, PCliffInstance
from .errors import BudgetExhaustedError, InvalidInputError, OracleContractError
from .group_core import (
    IDENTITY,
    Clifford1,
    PauliLabel,
    all_cliffords,
    clifford_compose,
    clifford_inverse,
    clifford_transpose,
)

logger = logging.getLogger(__name__)

PCliffOracleFn = Callable[[PCliffInstance], PauliLabel]
NonstabilizerFn = Callable[[Sequence[Clifford1]], SignedPauli2]
RandomizedNonstabilizerFn = Callable[[Sequence[Clifford1], np.random.Generator], SignedPauli2]

QUERIES_PER_NONSTABILIZER = 6
WEIGHT2_NONSTABILIZER_COUNT = 6

_SQUARE_LABELS = (
    ("XX", "YY", "ZZ"),
    ("YZ", "ZX", "XY"),
    ("ZY", "XZ", "YX"),
)


@dataclass(frozen=True)
class MagicSquare:
    """3x3 table of two-qubit Paulis; rows multiply to ``-I``, columns to ``+I``."""

    entries: tuple[tuple[SignedPauli2, ...], ...]

    def entry(self, row: int, column: int) -> SignedPauli2:
        return self.entries[row][column]

    def row(self, index: int) -> tuple[SignedPauli2, ...]:
        return self.entries[index]

    def column(self, index: int) -> tuple[SignedPauli2, ...]:
        return tuple(row[index] for row in self.entries)

    def line_product(self, line: Line) -> SignedPauli2:
        result = IDENTITY2
        for row, column in line.positions:
            result = pauli2_mul(result, self.entry(row, column))
        return result


@lru_cache(maxsize=1)
def magic_square() -> MagicSquare:
    return MagicSquare(
        tuple(tuple(SignedPauli2.parse(label) for label in row) for row in _SQUARE_LABELS)
    )


@dataclass(frozen=True)
class Line:
    axis: str
    index: int

    def __post_init__(self) -> None:
        if self.axis not in ("row", "column") or not 0 <= self.index < 3:
            raise InvalidInputError(f"Unknown magic-square line {self.axis}{self.index}")

    @property
    def positions(self) -> tuple[tuple[int, int], ...]:
        if self.axis == "row":
            return tuple((self.index, column) for column in range(3))
        return tuple((row, self.index) for row in range(3))

    @property
    def expected_sign(self) -> int:
        return -1 if self.axis == "row" else 1

    def __str__(self) -> str:
        return f"{self.axis}{self.index}"


LINES: tuple[Line, ...] = tuple(Line("row", i) for i in range(3)) + tuple(
    Line("column", i) for i in range(3)
)


def sign_assignment_exists() -> bool:
    """Whether some +-1 filling of the square matches every line sign (it never does)."""
    for values in product((1, -1), repeat=9):
        grid = np.array(values).reshape(3, 3)
        if all(
            int(np.prod([grid[r, c] for r, c in line.positions])) == line.expected_sign
            for line in LINES
        ):
            return True
    return False


@dataclass(frozen=True)
class LineSetting:
    """How one Bell measurement reads out a whole magic-square line.

    ``roles`` names the line positions played by ``X'X'``, ``Z'Z'`` and their
    product, where ``X' = d_a X d_a^dagger`` on the left and likewise on the
    right. ``signs[i]`` relates the entry at ``roles[i]`` to that operator.
    """

    line: Line
    rotation: BellBasisRotation
    roles: tuple[int, int, int]
    signs: tuple[int, int, int]

    def to_dict(self) -> dict[str, Any]:
        return {
            "line": str(self.line),
            "rotation": self.rotation.to_dict(),
            "roles": list(self.roles),
            "signs": list(self.signs),
        }


def _rotated_generators(d_a: Clifford1, d_b: Clifford1) -> tuple[SignedPauli2, SignedPauli2]:
    return (
        conjugate_pair(d_a, d_b, SignedPauli2.parse("XX")),
        conjugate_pair(d_a, d_b, SignedPauli2.parse("ZZ")),
    )


@lru_cache(maxsize=None)
def line_setting(line: Line) -> LineSetting:
    """First ``(d_a, d_b)`` in code order whose rotated XX and ZZ lie on ``line``."""
    square = magic_square()
    entries = [square.entry(r, c).unsigned() for r, c in line.positions]
    for d_a in all_cliffords():
        for d_b in all_cliffords():
            xx, zz = _rotated_generators(d_a, d_b)
            both = pauli2_mul(xx, zz)
            for x_pos, z_pos in permutations(range(3), 2):
                if xx.unsigned() != entries[x_pos] or zz.unsigned() != entries[z_pos]:
                    continue
                p_pos = 3 - x_pos - z_pos
                if both.unsigned() != entries[p_pos]:
                    continue
                return LineSetting(
                    line=line,
                    rotation=BellBasisRotation.from_pair(d_a, d_b),
                    roles=(x_pos, z_pos, p_pos),
                    signs=(xx.sign, zz.sign, both.sign),
                )
    raise RuntimeError(f"No Bell frame measures {line}")


def decode_line(setting: LineSetting, outcome: PauliLabel) -> tuple[int, int, int]:
    """Eigenvalues of the line's three entries implied by one Bell outcome."""
    relabeled = rotation_equivalence(setting.rotation, outcome)
    x_value = 1 if relabeled in (PauliLabel.I, PauliLabel.X) else -1
    z_value = 1 if relabeled in (PauliLabel.I, PauliLabel.Z) else -1
    by_role = (x_value, z_value, x_value * z_value)
    values = [0, 0, 0]
    for role, position in enumerate(setting.roles):
        values[position] = setting.signs[role] * by_role[role]
    return values[0], values[1], values[2]


def learn_nonstabilizer(
    oracle: PCliffOracleFn,
    cliffords: Sequence[Clifford1],
    *,
    correction: CorrectionFn | None = None,
) -> SignedPauli2:
    """Six oracle queries, one per line; returns the first entry read inconsistently.

    With ``correction`` set, every answer is checked against the support of
    CliffP(Q)_L for that Q.
    """
    square = magic_square()
    base = PCliffInstance(tuple(cliffords), IDENTITY)
    readings: dict[str, dict[tuple[int, int], int]] = {"row": {}, "column": {}}
    for line in LINES:
        setting = line_setting(line)
        instance = base.with_d(setting.rotation.d)
        answer = oracle(instance)
        if correction is not None and not pcliff_support(correction, instance, answer):
            raise OracleContractError(
                f"Oracle answered {answer.name} outside the support on {line}",
                instance=instance,
                answer=answer,
            )
        for position, value in zip(line.positions, decode_line(setting, answer)):
            readings[line.axis][position] = value
    for position in sorted(readings["row"]):
        if readings["row"][position] != readings["column"][position]:
            return square.entry(*position).unsigned()
    raise RuntimeError("Row and column readings agree everywhere")


def kilian_wrap(
    ns_oracle: NonstabilizerFn,
    cliffords: Sequence[Clifford1],
    rng: np.random.Generator,
) -> SignedPauli2:
    """Query ``ns_oracle`` on a re-randomized sequence with the same effective product.

    ``C'_1 = D_1 C_1`` and ``C'_j = D_j C_j D_{j-1}^-1``; the answer is mapped back
    through ``I (x) D_L^-1``.
    """
    elements = all_cliffords()
    masks = [elements[int(code)] for code in rng.integers(0, 24, size=len(cliffords))]
    masked: list[Clifford1] = []
    previous = IDENTITY
    for clifford, mask in zip(cliffords, masks):
        masked.append(clifford_compose(mask, clifford_compose(clifford, clifford_inverse(previous))))
        previous = mask
    answer = ns_oracle(tuple(masked))
    return conjugate_pair(IDENTITY, clifford_inverse(previous), answer).unsigned()


def uniform_nonstabilizer(
    kilian_oracle: RandomizedNonstabilizerFn,
    cliffords: Sequence[Clifford1],
    rng: np.random.Generator,
) -> SignedPauli2:
    """A uniformly random weight-2 non-stabilizer of ``(I (x) C_L ... C_1)|Phi>``.

    Conjugating by ``V* (x) V`` fixes ``|Phi>``; the first Clifford absorbs ``V``
    and the answer is mapped back through the left factor ``(V^T)^-1``.
    """
    cliffords = tuple(cliffords)
    v = all_cliffords()[int(rng.integers(0, 24))]
    answer = kilian_oracle((clifford_compose(cliffords[0], v),) + cliffords[1:], rng)
    return conjugate_pair(clifford_inverse(clifford_transpose(v)), IDENTITY, answer).unsigned()


def learning_failure_bound(budget: int) -> float:
    """Union bound on missing one of the six non-stabilizers in ``budget`` uniform draws."""
    return WEIGHT2_NONSTABILIZER_COUNT * (5 / 6) ** budget


@dataclass
class StabilizerLearningResult:
    pair: tuple[SignedPauli2, SignedPauli2]
    draws: int
    nonstabilizers: frozenset[SignedPauli2]
    queries: int
    history: list[SignedPauli2] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "stabilizers": [pauli.key() for pauli in self.pair],
            "draws": self.draws,
            "nonstabilizers": sorted(pauli.key() for pauli in self.nonstabilizers),
            "queries": self.queries,
        }


def learn_stabilizer_run(
    oracle: PCliffOracleFn,
    cliffords: Sequence[Clifford1],
    budget: int = 64,
    rng: np.random.Generator | int = 0,
) -> StabilizerLearningResult:
    if budget < WEIGHT2_NONSTABILIZER_COUNT:
        raise InvalidInputError(
            f"budget must be at least {WEIGHT2_NONSTABILIZER_COUNT}, got {budget}"
        )
    cliffords = tuple(cliffords)
    if not cliffords:
        raise InvalidInputError("Stabilizer learning needs at least one Clifford")
    rng = np.random.default_rng(rng)
    queries = 0

    def counted(instance: PCliffInstance) -> PauliLabel:
        nonlocal queries
        queries += 1
        return oracle(instance)

    def ns_oracle(sequence: Sequence[Clifford1]) -> SignedPauli2:
        return learn_nonstabilizer(counted, sequence)

    def kilian_oracle(sequence: Sequence[Clifford1], tape: np.random.Generator) -> SignedPauli2:
        return kilian_wrap(ns_oracle, sequence, tape)

    found: set[SignedPauli2] = set()
    history: list[SignedPauli2] = []
    for draw in range(1, budget + 1):
        sample = uniform_nonstabilizer(kilian_oracle, cliffords, rng)
        history.append(sample)
        found.add(sample)
        logger.debug("draw %d: %s (%d distinct)", draw, sample.key(), len(found))
        if len(found) == WEIGHT2_NONSTABILIZER_COUNT:
            stabilizers = sorted(
                (pair for pair in WEIGHT2_PAIRS if pair not in found), key=SignedPauli2.key
            )
            logger.info("stabilizers learned after %d draws: %s", draw, stabilizers[:2])
            return StabilizerLearningResult(
                pair=(stabilizers[0], stabilizers[1]),
                draws=draw,
                nonstabilizers=frozenset(found),
                queries=queries,
                history=history,
            )
    logger.warning("budget of %d draws exhausted with %d distinct", budget, len(found))
    raise BudgetExhaustedError(
        f"Found {len(found)} of {WEIGHT2_NONSTABILIZER_COUNT} non-stabilizers in {budget} draws",
        partial=sorted(found, key=SignedPauli2.key),
        budget=budget,
    )


def learn_stabilizer_pair(
    oracle: PCliffOracleFn,
    cliffords: Sequence[Clifford1],
    budget: int = 64,
    rng: np.random.Generator | int = 0,
) -> tuple[SignedPauli2, SignedPauli2]:
    return learn_stabilizer_run(oracle, cliffords, budget=budget, rng=rng).pair
