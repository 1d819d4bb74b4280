from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from telep_psim.errors import InvalidEncodingError, InvalidInputError
from telep_psim.group_core import (
    HADAMARD,
    IDENTITY,
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    PHASE,
    PauliLabel,
    S3Perm,
    SignedPauli1,
    all_cliffords,
    canonical_decomposition,
    clifford_compose,
    clifford_from_word,
    clifford_inverse,
    clifford_matrix,
    clifford_order,
    clifford_product,
    clifford_transpose,
    conjugate_pauli,
    decode_clifford,
    decode_pauli,
    encode_clifford,
    encode_pauli,
    pauli_clifford,
    pauli_mul,
    pauli_part,
    pauli_product,
    quotient_s3,
    random_cliffords,
)


def _equal_up_to_phase(a: np.ndarray, b: np.ndarray) -> bool:
    return abs(abs(np.trace(a.conj().T @ b)) - 2.0) < 1e-9


def test_pauli_products_track_phase() -> None:
    assert pauli_mul(PAULI_X, PAULI_Z) == SignedPauli1(1, 1, 0)
    assert pauli_mul(PAULI_Z, PAULI_X) == SignedPauli1(1, 1, 2)
    assert pauli_mul(PAULI_X, PAULI_Y).label == PauliLabel.Z
    assert str(pauli_mul(PAULI_X, PAULI_Y)) == "+iZ"
    assert pauli_product([PAULI_X, PAULI_X]) == PAULI_I
    assert pauli_mul(PAULI_Y, PAULI_Y) == PAULI_I


def test_pauli_matrices_match_symbolic_products() -> None:
    paulis = [SignedPauli1.from_label(label, sign) for label in PauliLabel for sign in (1, -1)]
    for a, b in product(paulis, repeat=2):
        assert np.allclose(pauli_mul(a, b).matrix(), a.matrix() @ b.matrix())


def test_codes_round_trip_and_reject_out_of_range() -> None:
    elements = all_cliffords()
    assert len(set(elements)) == 24
    assert [encode_clifford(c) for c in elements] == list(range(24))
    assert decode_clifford(0) == IDENTITY
    assert encode_clifford(HADAMARD) == 1
    assert encode_clifford(PHASE) == 2
    for bad in (-1, 24, 31):
        with pytest.raises(InvalidEncodingError):
            decode_clifford(bad)
    assert [decode_pauli(encode_pauli(label)) for label in PauliLabel] == list(PauliLabel)
    with pytest.raises(InvalidEncodingError):
        decode_pauli(4)


def test_canonical_decomposition_is_pauli_times_coset() -> None:
    for code, c in enumerate(all_cliffords()):
        label, coset = canonical_decomposition(c)
        assert code == int(label) * 6 + coset
        assert (pauli_part(c) is not None) == (coset == 0)


def test_tableau_agrees_with_matrices() -> None:
    for a, b in product(all_cliffords(), repeat=2):
        product_matrix = clifford_matrix(a) @ clifford_matrix(b)
        assert _equal_up_to_phase(clifford_matrix(clifford_compose(a, b)), product_matrix)


def test_conjugation_matches_matrix_conjugation() -> None:
    for c in all_cliffords():
        u = clifford_matrix(c)
        for label in PauliLabel:
            p = SignedPauli1.from_label(label)
            expected = u @ p.matrix() @ u.conj().T
            assert np.allclose(conjugate_pauli(c, p).matrix(), expected)


def test_inverse_transpose_and_order() -> None:
    for c in all_cliffords():
        assert clifford_compose(c, clifford_inverse(c)) == IDENTITY
        assert _equal_up_to_phase(clifford_matrix(clifford_transpose(c)), clifford_matrix(c).T)
        assert clifford_order(c) in (1, 2, 3, 4)
    assert clifford_order(HADAMARD) == 2
    assert clifford_order(PHASE) == 4
    assert clifford_order(clifford_from_word("SH")) == 3


def test_product_order_is_last_factor_leftmost() -> None:
    assert clifford_product((HADAMARD, PHASE)) == clifford_compose(PHASE, HADAMARD)
    assert clifford_product(()) == IDENTITY
    assert clifford_from_word("SH") == clifford_compose(PHASE, HADAMARD)
    with pytest.raises(InvalidInputError):
        clifford_from_word("Q")


def test_quotient_is_a_homomorphism_with_pauli_kernel() -> None:
    for a, b in product(all_cliffords(), repeat=2):
        assert quotient_s3(clifford_compose(a, b)) == quotient_s3(a).compose(quotient_s3(b))
    kernel = [c for c in all_cliffords() if quotient_s3(c).is_identity()]
    assert sorted(kernel, key=encode_clifford) == [pauli_clifford(label) for label in PauliLabel]
    assert quotient_s3(HADAMARD) == S3Perm.from_cycles("(13)")


def test_s3_cycles() -> None:
    perm = S3Perm.from_cycles("(123)")
    assert perm.images == (2, 3, 1)
    assert str(perm) == "(123)"
    assert perm.compose(perm.inverse()).is_identity()
    assert str(S3Perm()) == "()"
    with pytest.raises(InvalidInputError):
        S3Perm((1, 1, 2))


def test_invalid_tableau_rejected() -> None:
    from telep_psim.group_core import Clifford1

    with pytest.raises(InvalidInputError):
        Clifford1(PAULI_X, PAULI_X)
    with pytest.raises(InvalidInputError):
        Clifford1(PAULI_I, PAULI_Z)


def test_random_cliffords_are_seeded() -> None:
    first = random_cliffords(np.random.default_rng(3), 10)
    second = random_cliffords(np.random.default_rng(3), 10)
    assert first == second
    assert len(first) == 10


def test_clifford_key_identifies_the_tableau() -> None:
    from telep_psim.group_core import Clifford1

    elements = all_cliffords()
    assert len({c.key for c in elements}) == 24
    for a, b in product(elements, repeat=2):
        same_tableau = a.image_of_x == b.image_of_x and a.image_of_z == b.image_of_z
        assert (a == b) == same_tableau
    for c in elements:
        rebuilt = Clifford1(c.image_of_x, c.image_of_z)
        assert rebuilt == c and hash(rebuilt) == hash(c)
        assert encode_clifford(rebuilt) == encode_clifford(c)
    assert HADAMARD != "H"
    assert len({SignedPauli1(1, 1, k) for k in range(8)}) == 4


def test_cached_helpers_return_fresh_equal_results() -> None:
    for c in all_cliffords():
        assert clifford_transpose(clifford_transpose(c)) == c
    for label in PauliLabel:
        assert pauli_clifford(label) is pauli_clifford(PauliLabel(int(label)))
        assert pauli_part(pauli_clifford(label)) == label
