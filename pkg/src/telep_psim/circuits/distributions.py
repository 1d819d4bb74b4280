"""Output distributions of Telep_n and CliffP(Q)_L.

Probabilities are ``|tr|^2 / 4**n`` (respectively ``|tr|^2 / 4``). The squared
trace of a single-qubit Clifford only depends on its rotation class, so
:func:`trace_weight` makes the probability and support paths exact.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np

from ..errors import LengthMismatchError, SizeLimitError
from ..group_core import (
    IDENTITY,
    Clifford1,
    PauliLabel,
    all_cliffords,
    clifford_compose,
    clifford_matrix,
    clifford_order,
    pauli_clifford,
)
from .models import CorrectionFn, PCliffInstance, TelepInstance, TelepOutcome

EXHAUSTIVE_MAX_N = 8


@lru_cache(maxsize=1)
def _trace_weights() -> dict[Clifford1, int]:
    # |tr U|^2 = 4 cos^2(theta / 2) for a Bloch rotation by theta
    by_order = {1: 4, 2: 0, 3: 1, 4: 2}
    return {c: by_order[clifford_order(c)] for c in all_cliffords()}


def trace_weight(c: Clifford1) -> int:
    """``|tr U|^2`` for any unitary representative ``U`` of ``c``; one of 0, 1, 2, 4."""
    return _trace_weights()[c]


def _check_lengths(inst: TelepInstance, out: TelepOutcome) -> None:
    if inst.n != out.n:
        raise LengthMismatchError(f"Instance has n={inst.n} but outcome has {out.n} paulis")


def telep_product(inst: TelepInstance, out: TelepOutcome) -> Clifford1:
    """``P_{n-1} C_{n-1} ... P_0 C_0`` modulo phase."""
    _check_lengths(inst, out)
    acc = IDENTITY
    for clifford, pauli in zip(inst.cliffords, out.paulis):
        acc = clifford_compose(pauli_clifford(pauli), clifford_compose(clifford, acc))
    return acc


def telep_trace(inst: TelepInstance, out: TelepOutcome) -> complex:
    """Trace of the alternating product, evaluated with matrices."""
    _check_lengths(inst, out)
    acc = np.eye(2, dtype=complex)
    for clifford, pauli in zip(inst.cliffords, out.paulis):
        acc = clifford_matrix(pauli_clifford(pauli)) @ clifford_matrix(clifford) @ acc
    return complex(np.trace(acc))


def telep_prob(inst: TelepInstance, out: TelepOutcome) -> float:
    return trace_weight(telep_product(inst, out)) / 4**inst.n


def telep_support(inst: TelepInstance, out: TelepOutcome) -> bool:
    return trace_weight(telep_product(inst, out)) != 0


def telep_distribution(
    inst: TelepInstance, max_n: int = EXHAUSTIVE_MAX_N
) -> dict[TelepOutcome, float]:
    """All ``4**n`` outcome probabilities, lexicographic order."""
    if inst.n > max_n:
        raise SizeLimitError(f"Exhaustive distribution limited to n <= {max_n}, got {inst.n}")
    return {
        TelepOutcome(paulis): telep_prob(inst, TelepOutcome(paulis))
        for paulis in product(PauliLabel, repeat=inst.n)
    }


def last_factor_weights(prefix_product: Clifford1) -> dict[PauliLabel, int]:
    """``|tr(P A)|^2`` for each label P, given the accumulated product ``A``."""
    return {
        label: trace_weight(clifford_compose(pauli_clifford(label), prefix_product))
        for label in PauliLabel
    }


def telep_prefix_product(inst: TelepInstance, prefix: Sequence[PauliLabel]) -> Clifford1:
    """``C_{n-1} P_{n-2} C_{n-2} ... P_0 C_0`` for the first ``n - 1`` outcomes."""
    if len(prefix) != inst.n - 1:
        raise LengthMismatchError(f"Prefix needs {inst.n - 1} paulis, got {len(prefix)}")
    acc = inst.cliffords[0]
    for pauli, clifford in zip(prefix, inst.cliffords[1:]):
        acc = clifford_compose(clifford, clifford_compose(pauli_clifford(pauli), acc))
    return acc


def most_likely_telep_outcome(inst: TelepInstance) -> TelepOutcome:
    """Lexicographically least outcome of maximal probability.

    Every prefix reaches the whole Pauli coset of the product, so the maximum is
    attained with an all-identity prefix.
    """
    prefix = (PauliLabel.I,) * (inst.n - 1)
    weights = last_factor_weights(telep_prefix_product(inst, prefix))
    best = max(weights.values())
    last = min(label for label, weight in weights.items() if weight == best)
    return TelepOutcome(prefix + (last,))


def sample_telep_outcome(inst: TelepInstance, rng: np.random.Generator) -> TelepOutcome:
    """Exact Born-rule sample; the first ``n - 1`` outcomes are uniform."""
    prefix = tuple(PauliLabel(int(code)) for code in rng.integers(0, 4, size=inst.n - 1))
    weights = last_factor_weights(telep_prefix_product(inst, prefix))
    probs = np.array([weights[label] for label in PauliLabel], dtype=float) / 4.0
    last = PauliLabel(int(rng.choice(4, p=probs)))
    return TelepOutcome(prefix + (last,))


def pcliff_product(q: CorrectionFn, inst: PCliffInstance, p: PauliLabel) -> Clifford1:
    """``P D Q(C) C_L ... C_1`` modulo phase."""
    correction = pauli_clifford(q(inst.cliffords))
    tail = clifford_compose(correction, inst.product())
    return clifford_compose(pauli_clifford(p), clifford_compose(inst.d, tail))


def pcliff_trace(q: CorrectionFn, inst: PCliffInstance, p: PauliLabel) -> complex:
    matrix = clifford_matrix(pauli_clifford(p)) @ clifford_matrix(inst.d)
    matrix = matrix @ clifford_matrix(pauli_clifford(q(inst.cliffords)))
    for clifford in reversed(inst.cliffords):
        matrix = matrix @ clifford_matrix(clifford)
    return complex(np.trace(matrix))


def pcliff_prob(q: CorrectionFn, inst: PCliffInstance, p: PauliLabel) -> float:
    return trace_weight(pcliff_product(q, inst, p)) / 4


def pcliff_support(q: CorrectionFn, inst: PCliffInstance, p: PauliLabel) -> bool:
    return trace_weight(pcliff_product(q, inst, p)) != 0


def pcliff_weights(q: CorrectionFn, inst: PCliffInstance) -> dict[PauliLabel, int]:
    """``4 * Pr[p]`` for every outcome, evaluating ``Q`` and the product once."""
    corrected = clifford_compose(pauli_clifford(q(inst.cliffords)), inst.product())
    tail = clifford_compose(inst.d, corrected)
    return {
        label: trace_weight(clifford_compose(pauli_clifford(label), tail)) for label in PauliLabel
    }


def pcliff_distribution(q: CorrectionFn, inst: PCliffInstance) -> dict[PauliLabel, float]:
    return {label: weight / 4 for label, weight in pcliff_weights(q, inst).items()}
