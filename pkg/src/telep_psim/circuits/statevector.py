"""Dense state-vector simulation, used only to cross-check the exact path.

Pair j holds qubits ``(a_j, b_j)`` prepared in ``|Phi>`` with ``C_j`` applied to
``b_j``. Bell measurement j acts on ``(b_j, a_{j+1 mod n})``; outcome P is the
Bell state ``(I (x) P)|Phi>``.
"""

from __future__ import annotations

import logging

import numpy as np

from ..errors import SizeLimitError
from ..group_core import PAULI_MATRICES, PauliLabel, clifford_matrix, pauli_clifford
from .models import CorrectionFn, PCliffInstance, TelepInstance, TelepOutcome

logger = logging.getLogger(__name__)

STATEVECTOR_MAX_N = 6

BELL_STATE = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def bell_basis_vector(label: PauliLabel) -> np.ndarray:
    """``(I (x) P)|Phi>`` as a length-4 vector (first qubit most significant)."""
    return np.kron(np.eye(2), PAULI_MATRICES[label]) @ BELL_STATE


def _bell_measurement_matrix() -> np.ndarray:
    return np.array([bell_basis_vector(label).conj() for label in PauliLabel])


def statevector_distribution(
    inst: TelepInstance, max_n: int = STATEVECTOR_MAX_N
) -> dict[TelepOutcome, float]:
    n = inst.n
    if n > max_n:
        raise SizeLimitError(f"State-vector simulation limited to n <= {max_n}, got {n}")

    # pair tensors indexed [a_j, b_j]
    pairs = [
        (np.kron(np.eye(2), clifford_matrix(c)) @ BELL_STATE).reshape(2, 2)
        for c in inst.cliffords
    ]
    state = pairs[0]
    for pair in pairs[1:]:
        state = np.multiply.outer(state, pair)

    order: list[int] = []
    for j in range(n):
        order.extend([2 * j + 1, (2 * j + 2) % (2 * n)])
    state = np.transpose(state, order).reshape((4,) * n)

    measurement = _bell_measurement_matrix()
    for axis in range(n):
        state = np.moveaxis(np.tensordot(measurement, state, axes=([1], [axis])), 0, axis)

    probs = np.abs(state) ** 2
    logger.debug("statevector n=%d total=%.12f", n, float(probs.sum()))
    return {
        TelepOutcome(tuple(PauliLabel(int(i)) for i in index)): float(probs[index])
        for index in np.ndindex(*probs.shape)
    }


def pcliff_statevector_distribution(
    q: CorrectionFn, inst: PCliffInstance
) -> dict[PauliLabel, float]:
    """Bell measurement of ``(I (x) D Q C_L ... C_1)|Phi>``."""
    unitary = clifford_matrix(inst.d) @ clifford_matrix(pauli_clifford(q(inst.cliffords)))
    for clifford in reversed(inst.cliffords):
        unitary = unitary @ clifford_matrix(clifford)
    state = np.kron(np.eye(2), unitary) @ BELL_STATE
    return {
        label: float(abs(np.vdot(bell_basis_vector(label), state)) ** 2)
        for label in PauliLabel
    }
