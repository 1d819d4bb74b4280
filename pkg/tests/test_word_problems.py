from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest

from telep_psim.bell_states import SignedPauli2, state_of, weight2_stabilizers
from telep_psim.circuits import AdversarialPCliffOracle, HashedCorrection, HonestPCliffOracle
from telep_psim.errors import InvalidInputError, PromiseViolationError
from telep_psim.group_core import (
    HADAMARD,
    PHASE,
    PauliLabel,
    all_cliffords,
    clifford_product,
    pauli_clifford,
    quotient_s3,
)
from telep_psim.word_problems import (
    S_EVEN,
    S_ODD,
    WordProblemAnswer,
    WordProblemInstance,
    decide_mod3,
    decide_parity,
    encode_mod3,
    encode_parity,
    learned_coset,
    mod3_reference_sets,
    parse_bits,
    solve_mod3,
    solve_parity,
    solve_word_problem,
)


def test_parse_bits() -> None:
    assert parse_bits("0110") == (0, 1, 1, 0)
    assert parse_bits([1, 0]) == (1, 0)
    for bad in ("", "012", "1a", [2]):
        with pytest.raises(InvalidInputError):
            parse_bits(bad)


def test_encodings_land_in_the_right_cosets() -> None:
    for bits in ("0", "1", "11", "101", "1111"):
        weight = bits.count("1")
        parity_product = clifford_product(encode_parity(bits))
        expected = S_EVEN if weight % 2 == 0 else S_ODD
        assert weight2_stabilizers(state_of(parity_product)) == expected
        mod3_product = clifford_product(encode_mod3(bits))
        assert weight2_stabilizers(state_of(mod3_product)) == mod3_reference_sets()[weight % 3]


def test_decisions_from_stabilizer_pairs() -> None:
    xx, zz, xz, zx = (SignedPauli2.parse(p) for p in ("XX", "ZZ", "XZ", "ZX"))
    assert decide_parity(xx, SignedPauli2.parse("-YY")) == 0
    assert decide_parity(xz, zx) == 1
    with pytest.raises(InvalidInputError):
        decide_parity(xx, xx)
    with pytest.raises(InvalidInputError):
        decide_parity(xx, xz)
    sets = mod3_reference_sets()
    assert len({frozenset(s) for s in sets}) == 3
    for t, reference in enumerate(sets):
        s1, s2 = sorted(reference, key=SignedPauli2.key)[:2]
        assert decide_mod3(s1, s2) == t
    assert decide_mod3(xx, zz) == 0


def test_learned_coset_recovers_the_quotient() -> None:
    for c in all_cliffords():
        stabilizers = weight2_stabilizers(state_of(c))
        for s1, s2 in combinations(sorted(stabilizers, key=SignedPauli2.key), 2):
            assert learned_coset(s1, s2) == quotient_s3(c)


def test_solve_parity_example() -> None:
    assert solve_parity(HonestPCliffOracle(), "110", rng=7) == 0


def test_solvers_match_popcount() -> None:
    rng = np.random.default_rng(13)
    for length in (1, 2, 5, 9):
        bits = tuple(int(b) for b in rng.integers(0, 2, size=length))
        weight = sum(bits)
        for oracle in (
            HonestPCliffOracle(),
            AdversarialPCliffOracle(HashedCorrection(length), strategy_seed=length),
        ):
            assert solve_parity(oracle, bits, rng=rng) == weight % 2
            assert solve_mod3(oracle, bits, rng=rng) == weight % 3


def test_word_problem_instance_validation() -> None:
    wp = WordProblemInstance((HADAMARD, PHASE), HADAMARD)
    assert WordProblemInstance.from_dict(wp.to_dict()) == wp
    with pytest.raises(InvalidInputError):
        WordProblemInstance((HADAMARD,), pauli_clifford(PauliLabel.X))
    with pytest.raises(InvalidInputError):
        WordProblemInstance((), HADAMARD)
    with pytest.raises(InvalidInputError):
        WordProblemInstance.from_dict({"sequence": [1]})


def test_solve_word_problem() -> None:
    oracle = HonestPCliffOracle()
    target = clifford_product((PHASE, HADAMARD))
    yes = WordProblemInstance((PHASE, HADAMARD, pauli_clifford(PauliLabel.Z)), target)
    assert yes.promise_holds()
    assert solve_word_problem(oracle, yes, rng=1) == WordProblemAnswer.TARGET
    no = WordProblemInstance((HADAMARD, HADAMARD), target)
    assert solve_word_problem(oracle, no, rng=1) == WordProblemAnswer.IDENTITY
    broken = WordProblemInstance((PHASE,), HADAMARD)
    assert not broken.promise_holds()
    with pytest.raises(PromiseViolationError):
        solve_word_problem(oracle, broken, rng=1)
