"""Checks for the Telep embedding, lightcone counting and the falsifier."""

from __future__ import annotations

from itertools import product

import numpy as np

from ..circuits.distributions import pcliff_support
from ..circuits.falsifier import run_falsifier
from ..circuits.models import PCliffInstance, TelepOutcome
from ..circuits.oracles import ConstantTelepOracle, HonestTelepOracle
from ..config import ToolkitConfig
from ..errors import NoValidIndexError
from ..group_core import PauliLabel, SignedPauli1, all_cliffords, pauli_mul, random_cliffords
from ..lightcone.analysis import analyze_lightcones
from ..lightcone.generators import random_local_circuit
from ..reduction import (
    EmbeddingParams,
    InducedCorrection,
    algorithm_b,
    check_params_for_circuit,
    compute_q_correction,
    default_params,
    params_for_circuit,
    verify_commuting_identity,
)
from .base import CheckResult, PropertyCheck, ratio_result

IDENTITY_MAX_N = 8
LIGHTCONE_NU = 4


def random_params(rng: np.random.Generator, max_n: int = IDENTITY_MAX_N) -> EmbeddingParams:
    n = int(rng.integers(2, max_n + 1))
    L = int(rng.integers(1, n))
    m = int(rng.integers(L, n))
    J = frozenset(j for j in range(L, n) if rng.random() < 0.5)
    return EmbeddingParams(n=n, L=L, m=m, J=J)


class CommutingIdentityCheck(PropertyCheck):
    """``|Telep trace| == |tr(P D Q G)|`` on random tuples, plus a corrupted-Q control."""

    def __init__(self) -> None:
        super().__init__("commuting_identity", 3)

    def run(self, config: ToolkitConfig, seed: int) -> CheckResult:
        rng = np.random.default_rng(seed)
        tol = config.simulation.tolerance
        errors: list[str] = []
        passed = 0
        corrupted_failures = 0
        trials = config.verify.identity_trials
        for _ in range(trials):
            params = random_params(rng)
            cliffords = random_cliffords(rng, params.L)
            d = random_cliffords(rng, 1)[0]
            out = TelepOutcome(tuple(PauliLabel(int(v)) for v in rng.integers(0, 4, size=params.n)))
            if verify_commuting_identity(params, out, cliffords, d, tol=tol):
                passed += 1
            elif len(errors) < 10:
                errors.append(f"identity fails for {params.to_dict()} outcome {out.key()}")
            q = compute_q_correction(params, out, cliffords)
            corrupted = pauli_mul(SignedPauli1.from_label(q), SignedPauli1.from_label(PauliLabel.X))
            if not verify_commuting_identity(
                params, out, cliffords, d, tol=tol, q_override=corrupted.label
            ):
                corrupted_failures += 1
        if trials and corrupted_failures == 0:
            errors.append("corrupted correction never broke the identity")
        return ratio_result(passed, trials, errors, {"corrupted_failures": corrupted_failures})


class ReductionSoundnessCheck(PropertyCheck):
    """Every reduction answer lies in the support of the induced CliffP(Q)_L."""

    def __init__(self) -> None:
        super().__init__("reduction_soundness", 4)

    def run(self, config: ToolkitConfig, seed: int) -> CheckResult:
        rng = np.random.default_rng(seed)
        oracle = HonestTelepOracle()
        errors: list[str] = []
        passed = total = 0

        params = default_params(1)
        table = InducedCorrection(oracle, params).tabulate()
        for c1, d in product(all_cliffords(), repeat=2):
            total += 1
            inst = PCliffInstance((c1,), d)
            if pcliff_support(table, inst, algorithm_b(oracle, params, inst)):
                passed += 1
            elif len(errors) < 10:
                errors.append(f"L=1 answer outside support for {inst.to_dict()}")

        params = default_params(config.verify.reduction_random_L)
        induced = InducedCorrection(oracle, params)
        for _ in range(config.verify.reduction_random_instances):
            total += 1
            inst = PCliffInstance(random_cliffords(rng, params.L), random_cliffords(rng, 1)[0])
            if pcliff_support(induced, inst, algorithm_b(oracle, params, inst)):
                passed += 1
            elif len(errors) < 10:
                errors.append(f"L={params.L} answer outside support for {inst.to_dict()}")
        return ratio_result(passed, total, errors)


class LightconeCountingCheck(PropertyCheck):
    def __init__(self) -> None:
        super().__init__("lightcone_counting", 5)

    def run(self, config: ToolkitConfig, seed: int) -> CheckResult:
        settings = config.verify
        windows = config.lightcone
        rng = np.random.default_rng(seed)
        errors: list[str] = []
        passed = 0
        largest_j = 0
        for index in range(settings.lightcone_circuits):
            ell = int(rng.integers(1, settings.lightcone_max_ell + 1))
            circuit = random_local_circuit(
                settings.lightcone_n, ell, k=5, r=2, nu=LIGHTCONE_NU, depth=1, seed=rng
            )
            report = analyze_lightcones(
                circuit,
                divisor=windows.counting_window_divisor,
                signaling_factor=windows.signaling_factor,
            )
            problems: list[str] = []
            if not report.meets_counting_bounds():
                problems.append(f"counting bounds fail: {report.to_dict()}")
            try:
                params = params_for_circuit(
                    circuit,
                    divisor=windows.reduction_window_divisor,
                    signaling_factor=windows.signaling_factor,
                )
            except NoValidIndexError as exc:
                problems.append(str(exc))
            else:
                if 2 * params.m <= circuit.n:
                    problems.append(f"m={params.m} is not above n/2")
                problems.extend(
                    check_params_for_circuit(circuit, params, windows.signaling_factor)
                )
                largest_j = max(largest_j, len(params.J))
            if problems:
                errors.append(f"circuit {index} (ell={ell}): {'; '.join(problems)}")
            else:
                passed += 1
        return ratio_result(
            passed, settings.lightcone_circuits, errors[:10], {"largest_J": largest_j}
        )


class FalsifierCheck(PropertyCheck):
    """The all-identity candidate gets refuted; the honest sampler never does."""

    def __init__(self) -> None:
        super().__init__("falsifier", 11)

    def run(self, config: ToolkitConfig, seed: int) -> CheckResult:
        errors: list[str] = []
        passed = total = 0
        trials_needed: dict[str, int] = {}
        for n in range(1, config.falsify.max_n + 1):
            total += 1
            result = run_falsifier(
                ConstantTelepOracle(), config.verify.falsify_constant_trials, seed=seed, n=n
            )
            trials_needed[str(n)] = result.trials_run
            if result.refuted:
                passed += 1
            else:
                errors.append(f"constant candidate survived at n={n}")
        total += 1
        honest = run_falsifier(
            HonestTelepOracle(seed=seed),
            config.verify.falsify_honest_trials,
            seed=seed,
            max_n=config.falsify.max_n,
        )
        if honest.refuted:
            errors.append(f"honest sampler refuted: {honest.to_dict()}")
        else:
            passed += 1
        return ratio_result(
            passed, total, errors, {"constant_trials_needed": trials_needed}
        )
