from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from telep_psim.circuits import (
    AdversarialTelepOracle,
    CircuitTelepOracle,
    HonestTelepOracle,
    PCliffInstance,
    TelepOutcome,
    pcliff_support,
    telep_support,
)
from telep_psim.errors import InvalidInputError, LengthMismatchError
from telep_psim.group_core import HADAMARD, IDENTITY, PauliLabel, all_cliffords, random_cliffords
from telep_psim.lightcone import random_local_circuit
from telep_psim.reduction import (
    EmbeddingParams,
    InducedCorrection,
    algorithm_a,
    algorithm_b,
    check_params_for_circuit,
    commuting_identity_sides,
    compute_q_correction,
    default_params,
    embed,
    params_for_circuit,
    verify_commuting_identity,
)


def _random_params(rng: np.random.Generator) -> EmbeddingParams:
    n = int(rng.integers(2, 9))
    L = int(rng.integers(1, n))
    m = int(rng.integers(L, n))
    J = frozenset(j for j in range(L, n) if rng.random() < 0.5)
    return EmbeddingParams(n=n, L=L, m=m, J=J)


def test_params_validation_and_json() -> None:
    params = default_params(3)
    assert (params.n, params.L, params.m, params.J) == (5, 3, 3, frozenset({3, 4}))
    assert EmbeddingParams.from_dict(params.to_dict()) == params
    assert params.to_dict()["J"] == [3, 4]
    with pytest.raises(InvalidInputError):
        EmbeddingParams(n=4, L=0, m=1, J=frozenset())
    with pytest.raises(InvalidInputError):
        EmbeddingParams(n=4, L=2, m=4, J=frozenset())
    with pytest.raises(InvalidInputError):
        EmbeddingParams(n=4, L=2, m=2, J=frozenset({1}))
    with pytest.raises(InvalidInputError):
        EmbeddingParams.from_dict({"n": 4, "L": 2})


def test_embed_places_prefix_and_d() -> None:
    params = EmbeddingParams(n=5, L=2, m=3, J=frozenset({3}))
    inst = PCliffInstance((HADAMARD, HADAMARD), HADAMARD)
    embedded = embed(inst, params)
    assert embedded.cliffords == (HADAMARD, HADAMARD, IDENTITY, HADAMARD, IDENTITY)
    with pytest.raises(LengthMismatchError):
        embed(PCliffInstance((HADAMARD,), IDENTITY), params)


def test_commuting_identity_on_random_tuples() -> None:
    rng = np.random.default_rng(21)
    broken = 0
    for _ in range(150):
        params = _random_params(rng)
        cliffords = random_cliffords(rng, params.L)
        d = random_cliffords(rng, 1)[0]
        out = TelepOutcome(tuple(PauliLabel(int(v)) for v in rng.integers(0, 4, size=params.n)))
        lhs, rhs = commuting_identity_sides(params, out, cliffords, d)
        assert lhs == pytest.approx(rhs, abs=1e-9)
        q = compute_q_correction(params, out, cliffords)
        wrong = PauliLabel(int(q) ^ 1)
        if not verify_commuting_identity(params, out, cliffords, d, q_override=wrong):
            broken += 1
    assert broken > 0


def test_algorithm_a_reads_only_j() -> None:
    params = EmbeddingParams(n=4, L=1, m=2, J=frozenset({3}))
    out = TelepOutcome.parse("XYIZ")
    assert algorithm_a(params, out, IDENTITY) == PauliLabel.Z
    assert algorithm_a(params, TelepOutcome.parse("ZZIZ"), IDENTITY) == PauliLabel.Z
    with pytest.raises(LengthMismatchError):
        algorithm_a(params, TelepOutcome.parse("XYI"), IDENTITY)


def test_reduction_is_sound_for_l1_exhaustively() -> None:
    oracle = HonestTelepOracle()
    params = default_params(1)
    table = InducedCorrection(oracle, params).tabulate()
    assert len(table.entries) == 24
    for c1, d in product(all_cliffords(), repeat=2):
        inst = PCliffInstance((c1,), d)
        assert pcliff_support(table, inst, algorithm_b(oracle, params, inst))


def test_reduction_is_sound_for_random_l4() -> None:
    rng = np.random.default_rng(6)
    oracle = HonestTelepOracle()
    params = default_params(4)
    induced = InducedCorrection(oracle, params)
    for _ in range(100):
        inst = PCliffInstance(random_cliffords(rng, 4), random_cliffords(rng, 1)[0])
        assert pcliff_support(induced, inst, algorithm_b(oracle, params, inst))


def test_per_run_correction_is_valid_for_any_oracle() -> None:
    rng = np.random.default_rng(8)
    oracle = AdversarialTelepOracle(strategy_seed=5)
    for _ in range(100):
        params = _random_params(rng)
        inst = PCliffInstance(random_cliffords(rng, params.L), random_cliffords(rng, 1)[0])
        out = oracle(embed(inst, params))
        assert telep_support(embed(inst, params), out)
        q = compute_q_correction(params, out, inst.cliffords)
        answer = algorithm_a(params, out, inst.d)
        assert pcliff_support(lambda _: q, inst, answer)


def test_induced_correction_ignores_d_for_no_signaling_circuits() -> None:
    circuit = random_local_circuit(256, 1, k=5, r=2, nu=2, depth=1, seed=12)
    params = params_for_circuit(circuit)
    assert check_params_for_circuit(circuit, params) == []
    oracle = CircuitTelepOracle(circuit)
    at_identity = InducedCorrection(oracle, params)
    at_hadamard = InducedCorrection(oracle, params, reference_d=HADAMARD)
    rng = np.random.default_rng(1)
    for _ in range(5):
        cliffords = random_cliffords(rng, params.L)
        assert at_identity(cliffords) == at_hadamard(cliffords)


def test_check_params_reports_signaling() -> None:
    circuit = random_local_circuit(256, 1, k=5, r=2, nu=2, depth=1, seed=12)
    params = params_for_circuit(circuit)
    wrong_j = EmbeddingParams(n=params.n, L=params.L, m=params.m, J=params.J ^ {params.n - 1})
    problems = check_params_for_circuit(circuit, wrong_j)
    assert any("differs" in problem for problem in problems)
    other_n = default_params(1)
    assert check_params_for_circuit(circuit, other_n)


def test_induced_table_limited_to_small_l() -> None:
    with pytest.raises(InvalidInputError):
        InducedCorrection(HonestTelepOracle(), default_params(3)).tabulate()
