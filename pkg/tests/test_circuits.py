from __future__ import annotations

from itertools import product
from pathlib import Path

import numpy as np
import pytest

from telep_psim.circuits import (
    CorrectionTable,
    HashedCorrection,
    PCliffInstance,
    TelepInstance,
    TelepOutcome,
    identity_correction,
    instance_digest,
    most_likely_telep_outcome,
    pcliff_distribution,
    pcliff_prob,
    pcliff_statevector_distribution,
    pcliff_support,
    pcliff_trace,
    pcliff_weights,
    sample_telep_outcome,
    statevector_distribution,
    telep_distribution,
    telep_prob,
    telep_support,
    telep_trace,
    trace_weight,
)
from telep_psim.errors import (
    InvalidEncodingError,
    InvalidInputError,
    LengthMismatchError,
    SizeLimitError,
)
from telep_psim.group_core import (
    HADAMARD,
    IDENTITY,
    NON_IDENTITY_LABELS,
    PHASE,
    PauliLabel,
    all_cliffords,
    clifford_compose,
    clifford_from_word,
    clifford_matrix,
    clifford_product,
    pauli_clifford,
    random_cliffords,
)


def test_trace_weight_matches_matrices() -> None:
    for c in all_cliffords():
        assert trace_weight(c) == pytest.approx(abs(np.trace(clifford_matrix(c))) ** 2)
    assert trace_weight(IDENTITY) == 4
    assert trace_weight(HADAMARD) == 0
    assert trace_weight(PHASE) == 2
    assert trace_weight(clifford_from_word("SH")) == 1


def test_single_identity_teleports_with_certainty() -> None:
    inst = TelepInstance.from_dict({"n": 1, "cliffords": [0]})
    distribution = telep_distribution(inst)
    assert distribution[TelepOutcome.parse("I")] == 1.0
    assert sum(distribution.values()) == 1.0
    assert most_likely_telep_outcome(inst).key() == "I"


def test_exact_distribution_matches_statevector() -> None:
    rng = np.random.default_rng(11)
    for n in (1, 2, 3):
        for _ in range(5):
            inst = TelepInstance(random_cliffords(rng, n))
            exact = telep_distribution(inst)
            dense = statevector_distribution(inst)
            assert sum(exact.values()) == pytest.approx(1.0, abs=1e-12)
            for outcome, prob in exact.items():
                assert prob == pytest.approx(dense[outcome], abs=1e-9)
                assert telep_support(inst, outcome) == (prob > 0)


def test_trace_path_agrees_with_weights() -> None:
    rng = np.random.default_rng(5)
    inst = TelepInstance(random_cliffords(rng, 3))
    for paulis in product(PauliLabel, repeat=3):
        out = TelepOutcome(paulis)
        assert abs(telep_trace(inst, out)) ** 2 / 4**3 == pytest.approx(telep_prob(inst, out))


def test_honest_samples_stay_in_support() -> None:
    rng = np.random.default_rng(2)
    for n in (1, 4, 12):
        inst = TelepInstance(random_cliffords(rng, n))
        best = most_likely_telep_outcome(inst)
        assert telep_support(inst, best)
        for _ in range(20):
            assert telep_support(inst, sample_telep_outcome(inst, rng))


def test_most_likely_outcome_is_maximal() -> None:
    rng = np.random.default_rng(8)
    inst = TelepInstance(random_cliffords(rng, 3))
    distribution = telep_distribution(inst)
    assert telep_prob(inst, most_likely_telep_outcome(inst)) == max(distribution.values())


def test_instance_validation() -> None:
    with pytest.raises(InvalidInputError):
        TelepInstance(())
    with pytest.raises(InvalidInputError):
        TelepInstance.from_dict({"n": 1})
    with pytest.raises(LengthMismatchError):
        TelepInstance.from_dict({"n": 2, "cliffords": [0]})
    with pytest.raises(InvalidEncodingError):
        TelepInstance.from_dict({"cliffords": [24]})
    with pytest.raises(LengthMismatchError):
        telep_prob(TelepInstance((IDENTITY,)), TelepOutcome.parse("II"))
    with pytest.raises(SizeLimitError):
        statevector_distribution(TelepInstance((IDENTITY,) * 7))


def test_pcliff_distribution_matches_statevector() -> None:
    rng = np.random.default_rng(4)
    for L in (1, 2):
        table = CorrectionTable.random(L, rng)
        for _ in range(10):
            inst = PCliffInstance(random_cliffords(rng, L), random_cliffords(rng, 1)[0])
            exact = pcliff_distribution(table, inst)
            dense = pcliff_statevector_distribution(table, inst)
            assert sum(exact.values()) == pytest.approx(1.0)
            for label in PauliLabel:
                assert exact[label] == pytest.approx(dense[label], abs=1e-9)
                expected = abs(pcliff_trace(table, inst, label)) ** 2 / 4
                assert pcliff_prob(table, inst, label) == pytest.approx(expected)


def test_pcliff_identity_instance() -> None:
    inst = PCliffInstance((IDENTITY,), IDENTITY)
    assert pcliff_distribution(identity_correction, inst)[PauliLabel.I] == 1.0
    assert not pcliff_support(identity_correction, inst, PauliLabel.X)
    assert PCliffInstance.from_dict(inst.to_dict()) == inst
    with pytest.raises(LengthMismatchError):
        PCliffInstance.from_dict({"L": 2, "cliffords": [0], "d": 0})


def test_correction_table_file_and_lookup(tmp_path: Path) -> None:
    table = CorrectionTable.random(1, seed=3)
    assert len(table.entries) == 24
    path = table.write(tmp_path / "tables" / "q.json")
    loaded = CorrectionTable.load(path)
    assert loaded.entries == table.entries
    for c in all_cliffords():
        assert loaded((c,)) == table((c,))
    with pytest.raises(LengthMismatchError):
        table((IDENTITY, IDENTITY))


def test_partial_table_uses_default() -> None:
    table = CorrectionTable.from_dict({"L": 1, "entries": {"1": 3}, "default": 1})
    assert table((HADAMARD,)) == PauliLabel.Z
    assert table((IDENTITY,)) == PauliLabel.X
    strict = CorrectionTable.from_dict({"L": 1, "entries": {"1": 3}})
    with pytest.raises(InvalidInputError):
        strict((IDENTITY,))
    with pytest.raises(LengthMismatchError):
        CorrectionTable.from_dict({"L": 2, "entries": {"1": 0}})


def test_hashed_correction_is_deterministic() -> None:
    q = HashedCorrection(seed=9)
    values = [q((c, HADAMARD)) for c in all_cliffords()]
    assert values == [HashedCorrection(seed=9)((c, HADAMARD)) for c in all_cliffords()]
    assert len(set(values)) > 1


def _times(a: PauliLabel, b: PauliLabel) -> PauliLabel:
    return PauliLabel.from_bits(a.x_bit ^ b.x_bit, a.z_bit ^ b.z_bit)


def test_pauli_twist_with_compensated_outcome_keeps_support() -> None:
    rng = np.random.default_rng(21)
    for n in (1, 2, 3):
        inst = TelepInstance(random_cliffords(rng, n))
        for j in range(n):
            for twist in NON_IDENTITY_LABELS:
                cliffords = list(inst.cliffords)
                cliffords[j] = clifford_compose(cliffords[j], pauli_clifford(twist))
                twisted = TelepInstance(tuple(cliffords))
                for paulis in product(PauliLabel, repeat=n):
                    moved = list(paulis)
                    moved[(j - 1) % n] = _times(twist, moved[(j - 1) % n])
                    out, compensated = TelepOutcome(paulis), TelepOutcome(tuple(moved))
                    assert telep_support(twisted, compensated) == telep_support(inst, out)
                    assert telep_prob(twisted, compensated) == telep_prob(inst, out)


def test_pcliff_instance_caches_its_product() -> None:
    rng = np.random.default_rng(6)
    cliffords = random_cliffords(rng, 5)
    inst = PCliffInstance(cliffords, HADAMARD)
    assert inst.product() == clifford_product(cliffords)
    moved = inst.with_d(PHASE)
    assert moved.d == PHASE and moved.cliffords == inst.cliffords
    assert moved.product() is inst.product()
    assert moved == PCliffInstance(cliffords, PHASE)
    assert hash(moved) == hash(PCliffInstance(cliffords, PHASE))
    assert "_product" not in repr(inst)


def test_pcliff_weights_match_probabilities() -> None:
    rng = np.random.default_rng(13)
    table = CorrectionTable.random(2, seed=4)
    for _ in range(30):
        inst = PCliffInstance(random_cliffords(rng, 2), random_cliffords(rng, 1)[0])
        weights = pcliff_weights(table, inst)
        assert sum(weights.values()) == 4
        for label in PauliLabel:
            assert weights[label] / 4 == pcliff_prob(table, inst, label)
            assert (weights[label] > 0) == pcliff_support(table, inst, label)


def test_instance_digest_is_stable_and_seed_dependent() -> None:
    assert instance_digest(3, (1, 2, 3)) == instance_digest(3, [1, 2, 3])
    assert instance_digest(3, (1, 2, 3)) != instance_digest(4, (1, 2, 3))
    assert instance_digest(3, (1, 2)) != instance_digest(3, (1, 2, 0))
    assert 0 <= instance_digest(-1, ()) < 2**64
    labels = [HashedCorrection(seed)((HADAMARD, PHASE)) for seed in range(800)]
    for label in PauliLabel:
        assert 140 <= labels.count(label) <= 260


@pytest.mark.parametrize(
    "payload",
    [
        {"cliffords": ["x"], "d": 0},
        {"cliffords": 5, "d": 0},
        {"cliffords": [None], "d": 0},
        {"cliffords": [0], "d": "H"},
        {"cliffords": [True], "d": 0},
    ],
)
def test_pcliff_instance_rejects_malformed_codes(payload: dict) -> None:
    with pytest.raises(InvalidInputError):
        PCliffInstance.from_dict(payload)


def test_correction_table_rejects_malformed_payloads() -> None:
    with pytest.raises(InvalidInputError):
        CorrectionTable.from_dict({"entries": {"0": 1}})
    with pytest.raises(InvalidInputError):
        CorrectionTable.from_dict({"L": 1, "entries": [1, 2]})
    with pytest.raises(InvalidEncodingError):
        CorrectionTable.from_dict({"L": 1, "entries": {"a": 1}})
    with pytest.raises(InvalidEncodingError):
        CorrectionTable.from_dict({"L": 1, "entries": {"0": "Y"}})
    loose = CorrectionTable.from_dict({"L": "1", "entries": {" 3 ": 2}})
    assert loose.entries == {(3,): PauliLabel.Y}
