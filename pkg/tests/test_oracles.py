from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from telep_psim.circuits import (
    AdversarialPCliffOracle,
    AdversarialTelepOracle,
    CircuitTelepOracle,
    ConstantTelepOracle,
    CorrectionTable,
    CountingOracle,
    HonestPCliffOracle,
    HonestTelepOracle,
    PCliffInstance,
    SupportCheckedOracle,
    TableOracle,
    TelepInstance,
    adversarial_oracle,
    falsify_simulator,
    honest_oracle,
    most_likely_telep_outcome,
    pcliff_support,
    pcliff_weights,
    run_falsifier,
    telep_support,
)
from telep_psim.circuits.oracles import ADVERSARIAL_STRATEGIES
from telep_psim.errors import InvalidInputError, LengthMismatchError, OracleContractError
from telep_psim.group_core import HADAMARD, IDENTITY, PHASE, PauliLabel, random_cliffords
from telep_psim.lightcone import constant_circuit, wire_identity


def test_honest_telep_oracle_modes() -> None:
    rng = np.random.default_rng(1)
    inst = TelepInstance(random_cliffords(rng, 5))
    assert HonestTelepOracle()(inst) == most_likely_telep_outcome(inst)
    seeded = HonestTelepOracle(seed=4)
    first = seeded(inst)
    assert seeded(inst) == first
    assert HonestTelepOracle(seed=4)(inst) == first
    assert telep_support(inst, first)


def test_adversarial_telep_answers_stay_in_support() -> None:
    rng = np.random.default_rng(2)
    for strategy in ADVERSARIAL_STRATEGIES:
        oracle = AdversarialTelepOracle(strategy_seed=3, strategy=strategy)
        for _ in range(30):
            inst = TelepInstance(random_cliffords(rng, int(rng.integers(1, 9))))
            assert telep_support(inst, oracle(inst))
    with pytest.raises(InvalidInputError):
        AdversarialTelepOracle(strategy="random")


def test_pcliff_oracles_stay_in_support() -> None:
    rng = np.random.default_rng(3)
    table = CorrectionTable.random(2, seed=5)
    oracles = [HonestPCliffOracle(table), HonestPCliffOracle(table, seed=1)] + [
        AdversarialPCliffOracle(table, strategy_seed=7, strategy=strategy)
        for strategy in ADVERSARIAL_STRATEGIES
    ]
    for _ in range(40):
        inst = PCliffInstance(random_cliffords(rng, 2), random_cliffords(rng, 1)[0])
        for oracle in oracles:
            assert pcliff_support(table, inst, oracle(inst))


def test_seeded_honest_pcliff_answers_follow_born_weights() -> None:
    inst = PCliffInstance((HADAMARD, PHASE), IDENTITY)
    weights = pcliff_weights(lambda _: PauliLabel.I, inst)
    answers = [HonestPCliffOracle(seed=seed)(inst) for seed in range(800)]
    for label in PauliLabel:
        assert abs(answers.count(label) / 800 - weights[label] / 4) < 0.07
        if weights[label] == 0:
            assert label not in answers


def test_hashed_pcliff_adversary_spreads_over_the_support() -> None:
    rng = np.random.default_rng(9)
    seen_sizes = set()
    for _ in range(40):
        inst = PCliffInstance(random_cliffords(rng, 3), random_cliffords(rng, 1)[0])
        weights = pcliff_weights(lambda _: PauliLabel.I, inst)
        support = {label for label, weight in weights.items() if weight}
        answers = {AdversarialPCliffOracle(strategy_seed=seed)(inst) for seed in range(24)}
        assert answers <= support
        if len(support) > 1:
            assert len(answers) > 1
        seen_sizes.add(len(support))
    assert max(seen_sizes) > 1


def test_oracle_factories() -> None:
    assert isinstance(honest_oracle("telep"), HonestTelepOracle)
    assert isinstance(adversarial_oracle("pcliff", strategy_seed=2), AdversarialPCliffOracle)
    with pytest.raises(InvalidInputError):
        honest_oracle("bogus")


def test_table_oracle_from_file(tmp_path: Path) -> None:
    path = tmp_path / "oracle.json"
    path.write_text(
        json.dumps({"kind": "pcliff", "entries": {"0,0": 0, "1,0": 2}}), encoding="utf-8"
    )
    oracle = TableOracle.load(path)
    assert oracle.kind == "pcliff"
    assert oracle(PCliffInstance((IDENTITY,), IDENTITY)) == PauliLabel.I
    assert oracle(PCliffInstance((HADAMARD,), IDENTITY)) == PauliLabel.Y
    with pytest.raises(OracleContractError):
        oracle(PCliffInstance((IDENTITY,), HADAMARD))


def test_telep_table_oracle() -> None:
    oracle = TableOracle.from_dict({"kind": "telep", "entries": {"0,1": [0, 3]}})
    answer = oracle(TelepInstance.from_codes([0, 1]))
    assert answer.key() == "IZ"
    with pytest.raises(InvalidInputError):
        TableOracle("other", {})


def test_support_checked_oracle_rejects_bad_answers() -> None:
    checked = SupportCheckedOracle(ConstantTelepOracle())
    assert checked(TelepInstance((IDENTITY,))).key() == "I"
    with pytest.raises(OracleContractError) as excinfo:
        checked(TelepInstance((HADAMARD,)))
    assert excinfo.value.exit_code == 2
    assert excinfo.value.answer.key() == "I"


def test_counting_oracle_counts_repeats() -> None:
    counting = CountingOracle(HonestTelepOracle())
    inst = TelepInstance((HADAMARD, HADAMARD))
    counting(inst)
    counting(inst)
    assert counting.queries == 2
    assert counting.kind == "telep"


def test_circuit_oracle() -> None:
    oracle = CircuitTelepOracle(constant_circuit(3, value=0))
    assert oracle.n == 3
    assert oracle(TelepInstance((IDENTITY,) * 3)).key() == "III"
    with pytest.raises(LengthMismatchError):
        oracle(TelepInstance((IDENTITY,) * 2))
    with pytest.raises(InvalidInputError):
        CircuitTelepOracle(wire_identity(3))


def test_falsifier_refutes_constant_candidate() -> None:
    result = run_falsifier(ConstantTelepOracle(), trials=500, seed=0, n=2)
    assert result.refuted
    assert not telep_support(result.counterexample, result.answer)
    payload = result.to_dict()
    assert payload["refuted"] is True
    assert payload["trials_run"] == result.trials_run
    assert falsify_simulator(ConstantTelepOracle(), trials=500, seed=0, n=2) == result.counterexample
    assert falsify_simulator(HonestTelepOracle(), trials=50, seed=0, n=2) is None


def test_falsifier_accepts_honest_sampler() -> None:
    result = run_falsifier(HonestTelepOracle(seed=3), trials=300, seed=1, max_n=6)
    assert not result.refuted
    assert result.trials_run == 300
    with pytest.raises(InvalidInputError):
        run_falsifier(HonestTelepOracle(), trials=-1)


def test_circuit_candidate_is_refuted() -> None:
    result = run_falsifier(CircuitTelepOracle(constant_circuit(4, value=0)), trials=500, seed=2)
    assert result.refuted
    assert result.counterexample.n == 4
