from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from telep_psim.bell_states import (
    IDENTITY2,
    WEIGHT2_PAIRS,
    BellBasisRotation,
    SignedPauli2,
    StabilizerPair,
    conjugate_pair,
    expectation,
    one_sided_rotation,
    pauli2_mul,
    pauli_twisted,
    rotation_equivalence,
    state_of,
    weight2_nonstabilizers,
    weight2_stabilizers,
)
from telep_psim.errors import InvalidInputError
from telep_psim.group_core import (
    HADAMARD,
    IDENTITY,
    PAULI_MATRICES,
    PauliLabel,
    all_cliffords,
    clifford_compose,
    clifford_matrix,
    pauli_clifford,
)

PHI = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def _matrix(p: SignedPauli2) -> np.ndarray:
    return (1j**p.phase_exp) * np.kron(PAULI_MATRICES[p.left], PAULI_MATRICES[p.right])


def _state_vector(c) -> np.ndarray:
    return np.kron(np.eye(2), clifford_matrix(c)) @ PHI


def test_parse_and_key() -> None:
    assert SignedPauli2.parse("-YY") == SignedPauli2(PauliLabel.Y, PauliLabel.Y, 2)
    assert SignedPauli2.parse("+Z(x)X").key() == "ZX"
    assert str(SignedPauli2.parse("XZ")) == "+XZ"
    with pytest.raises(InvalidInputError):
        SignedPauli2.parse("XYZ")


def test_bell_state_stabilizers() -> None:
    state = state_of(IDENTITY)
    assert expectation(state, SignedPauli2.parse("XX")) == 1
    assert expectation(state, SignedPauli2.parse("ZZ")) == 1
    assert expectation(state, SignedPauli2.parse("YY")) == -1
    assert expectation(state, SignedPauli2.parse("XZ")) == 0
    assert weight2_stabilizers(state) == {SignedPauli2.parse(p) for p in ("XX", "YY", "ZZ")}


def test_expectations_match_dense_states() -> None:
    for c in all_cliffords():
        vector = _state_vector(c)
        state = state_of(c)
        for pauli in WEIGHT2_PAIRS:
            dense = np.vdot(vector, _matrix(pauli) @ vector).real
            assert abs(dense - expectation(state, pauli)) < 1e-9


def test_every_state_has_three_stabilizers_and_six_nonstabilizers() -> None:
    for c in all_cliffords():
        state = state_of(c)
        assert len(weight2_stabilizers(state)) == 3
        assert len(weight2_nonstabilizers(state)) == 6
        assert weight2_stabilizers(state) == state.unsigned_stabilizers()


def test_pauli_twist_only_flips_signs() -> None:
    for c, label in product(all_cliffords(), PauliLabel):
        state = state_of(c)
        twisted = pauli_twisted(state, label)
        assert twisted.unsigned_stabilizers() == state.unsigned_stabilizers()
        assert twisted == state_of(clifford_compose(pauli_clifford(label), c))


def test_stabilizer_pair_validation() -> None:
    with pytest.raises(InvalidInputError):
        StabilizerPair(SignedPauli2.parse("XX"), SignedPauli2.parse("XX"))
    with pytest.raises(InvalidInputError):
        StabilizerPair(SignedPauli2.parse("XX"), SignedPauli2.parse("XZ"))
    with pytest.raises(InvalidInputError):
        StabilizerPair(IDENTITY2, SignedPauli2.parse("ZZ"))


def test_pauli2_products() -> None:
    xx = SignedPauli2.parse("XX")
    zz = SignedPauli2.parse("ZZ")
    assert pauli2_mul(xx, zz) == SignedPauli2.parse("-YY")
    for a, b in product(WEIGHT2_PAIRS, repeat=2):
        assert np.allclose(_matrix(pauli2_mul(a, b)), _matrix(a) @ _matrix(b))


def test_conjugate_pair_matches_kron() -> None:
    for d_a, d_b in [(HADAMARD, IDENTITY), (IDENTITY, HADAMARD), (HADAMARD, HADAMARD)]:
        u = np.kron(clifford_matrix(d_a), clifford_matrix(d_b))
        for pauli in WEIGHT2_PAIRS:
            expected = u @ _matrix(pauli) @ u.conj().T
            assert np.allclose(_matrix(conjugate_pair(d_a, d_b, pauli)), expected)


def test_one_sided_rotation_reproduces_basis() -> None:
    """Outcome P of the one-sided measurement is outcome P' of the rotated frame."""
    for d_a, d_b in product(all_cliffords()[:6], repeat=2):
        rot = BellBasisRotation.from_pair(d_a, d_b)
        assert rot.d == one_sided_rotation(d_a, d_b)
        d_dagger = clifford_matrix(rot.d).conj().T
        u = np.kron(clifford_matrix(d_a), clifford_matrix(d_b))
        for label in PauliLabel:
            one_sided = np.kron(np.eye(2), d_dagger @ PAULI_MATRICES[label]) @ PHI
            relabeled = rotation_equivalence(rot, label)
            rotated = u @ np.kron(np.eye(2), PAULI_MATRICES[relabeled]) @ PHI
            assert abs(abs(np.vdot(rotated, one_sided)) - 1.0) < 1e-9


def test_rotation_requires_consistent_d() -> None:
    with pytest.raises(InvalidInputError):
        BellBasisRotation(d_a=HADAMARD, d_b=IDENTITY, d=IDENTITY)
