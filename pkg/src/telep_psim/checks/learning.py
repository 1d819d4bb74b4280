"""Statistical and adversarial checks for tomography and the word problems."""

from __future__ import annotations

import logging
import math
import multiprocessing
import os
from collections import Counter
from typing import Sequence

import numpy as np
from scipy.stats import chi2_contingency, chisquare

from ..bell_states import SignedPauli2, expectation, state_of, weight2_nonstabilizers
from ..circuits.models import CorrectionTable, HashedCorrection
from ..circuits.oracles import (
    ADVERSARIAL_STRATEGIES,
    AdversarialPCliffOracle,
    CountingOracle,
    HonestPCliffOracle,
)
from ..config import ToolkitConfig
from ..errors import BudgetExhaustedError
from ..group_core import (
    HADAMARD,
    IDENTITY,
    PHASE,
    Clifford1,
    all_cliffords,
    clifford_product,
    random_cliffords,
)
from ..tomography import (
    QUERIES_PER_NONSTABILIZER,
    PCliffOracleFn,
    kilian_wrap,
    learn_nonstabilizer,
    learn_stabilizer_run,
    learning_failure_bound,
    uniform_nonstabilizer,
)
from ..word_problems import solve_mod3, solve_parity
from .base import CheckResult, PropertyCheck, ratio_result

logger = logging.getLogger(__name__)

UNIFORM_TOLERANCE = 0.03


def adversary(seed: int, L: int = 1) -> AdversarialPCliffOracle:
    """Adversarial oracle whose correction function is also chosen by ``seed``."""
    correction = CorrectionTable.random(L, seed) if L == 1 else HashedCorrection(seed)
    strategy = ADVERSARIAL_STRATEGIES[seed % len(ADVERSARIAL_STRATEGIES)]
    return AdversarialPCliffOracle(correction=correction, strategy_seed=seed, strategy=strategy)


def nonstabilizer_counts(
    oracle: PCliffOracleFn, cliffords: Sequence[Clifford1], draws: int, seed: int
) -> Counter[SignedPauli2]:
    rng = np.random.default_rng(seed)

    def kilian_oracle(sequence: Sequence[Clifford1], tape: np.random.Generator) -> SignedPauli2:
        return kilian_wrap(lambda s: learn_nonstabilizer(oracle, s), sequence, tape)

    return Counter(uniform_nonstabilizer(kilian_oracle, cliffords, rng) for _ in range(draws))


def kilian_counts(
    oracle: PCliffOracleFn, cliffords: Sequence[Clifford1], draws: int, seed: int
) -> Counter[SignedPauli2]:
    rng = np.random.default_rng(seed)
    return Counter(
        kilian_wrap(lambda s: learn_nonstabilizer(oracle, s), cliffords, rng) for _ in range(draws)
    )


class AdversarialNonstabilizerCheck(PropertyCheck):
    def __init__(self) -> None:
        super().__init__("adversarial_nonstabilizer", 7)

    def run(self, config: ToolkitConfig, seed: int) -> CheckResult:
        errors: list[str] = []
        passed = total = 0
        query_counts: set[int] = set()
        for c in all_cliffords():
            state = state_of(c)
            for offset in range(config.verify.nonstabilizer_seeds):
                total += 1
                oracle = CountingOracle(adversary(seed + offset))
                result = learn_nonstabilizer(oracle, (c,), correction=oracle.inner.correction)
                query_counts.add(oracle.queries)
                if expectation(state, result) == 0:
                    passed += 1
                elif len(errors) < 10:
                    errors.append(f"{result.key()} stabilizes the state of {c} (seed {seed + offset})")
        if query_counts != {QUERIES_PER_NONSTABILIZER}:
            errors.append(
                f"query counts {sorted(query_counts)} differ from {QUERIES_PER_NONSTABILIZER}"
            )
        return ratio_result(passed, total, errors)


def _uniformity_problems(
    counts: Counter[SignedPauli2], support: frozenset[SignedPauli2], alpha: float, label: str
) -> list[str]:
    draws = sum(counts.values())
    problems = []
    stray = sorted(p.key() for p in counts if p not in support)
    if stray:
        problems.append(f"{label}: draws outside the non-stabilizer orbit: {stray}")
    p = 1 / len(support)
    tolerance = max(UNIFORM_TOLERANCE, 5 * math.sqrt(p * (1 - p) / max(draws, 1)))
    observed = [counts.get(pauli, 0) for pauli in sorted(support, key=SignedPauli2.key)]
    for pauli, count in zip(sorted(support, key=SignedPauli2.key), observed):
        if abs(count / draws - p) > tolerance:
            problems.append(f"{label}: {pauli.key()} frequency {count / draws:.4f}")
    pvalue = float(chisquare(observed).pvalue)
    if pvalue <= alpha:
        problems.append(f"{label}: chi-square p={pvalue:.4g} <= {alpha}")
    return problems


class UniformityCheck(PropertyCheck):
    def __init__(self) -> None:
        super().__init__("uniformity", 8)

    def run(self, config: ToolkitConfig, seed: int) -> CheckResult:
        draws = config.verify.uniformity_draws
        alpha = config.verify.chi_square_alpha
        errors: list[str] = []
        details: dict[str, object] = {}
        passed = 0
        cases = [
            ("honest", HonestPCliffOracle(), (IDENTITY,)),
            ("adversarial", adversary(seed, L=2), (HADAMARD, PHASE)),
        ]
        for label, oracle, cliffords in cases:
            counts = nonstabilizer_counts(oracle, cliffords, draws, seed)
            support = weight2_nonstabilizers(state_of(clifford_product(cliffords)))
            problems = _uniformity_problems(counts, support, alpha, label)
            errors.extend(problems)
            if not problems:
                passed += 1
            details[label] = {pauli.key(): count for pauli, count in counts.items()}

        oracle = adversary(seed + 1, L=3)
        first = kilian_counts(oracle, (HADAMARD, HADAMARD, HADAMARD), draws, seed)
        second = kilian_counts(oracle, (IDENTITY, IDENTITY, HADAMARD), draws, seed + 1)
        keys = sorted(set(first) | set(second), key=SignedPauli2.key)
        table = np.array([[first.get(k, 0) for k in keys], [second.get(k, 0) for k in keys]])
        pvalue = float(chi2_contingency(table).pvalue) if len(keys) > 1 else 1.0
        details["kilian_pvalue"] = pvalue
        if pvalue <= alpha:
            errors.append(f"kilian outputs depend on more than the product (p={pvalue:.4g})")
        else:
            passed += 1
        return ratio_result(passed, 3, errors, details)


class StabilizerLearningCheck(PropertyCheck):
    def __init__(self) -> None:
        super().__init__("stabilizer_learning", 9)

    def run(self, config: ToolkitConfig, seed: int) -> CheckResult:
        trials = config.verify.learning_trials
        budget = config.run.budget
        rng = np.random.default_rng(seed)
        errors: list[str] = []
        successes = exhausted = 0
        for trial in range(trials):
            L = int(rng.integers(1, 5))
            cliffords = random_cliffords(rng, L)
            oracle = HonestPCliffOracle() if trial % 2 == 0 else adversary(seed + trial, L)
            try:
                result = learn_stabilizer_run(oracle, cliffords, budget=budget, rng=rng)
            except BudgetExhaustedError:
                exhausted += 1
                continue
            state = state_of(clifford_product(cliffords))
            s1, s2 = result.pair
            if s1 != s2 and all(s.weight == 2 and expectation(state, s) != 0 for s in result.pair):
                successes += 1
            elif len(errors) < 10:
                errors.append(f"trial {trial}: {s1.key()}, {s2.key()} are not two stabilizers")
        allowed = max(1, trials // 1000)
        if exhausted > allowed:
            errors.append(f"{exhausted} of {trials} runs exhausted the budget (allowed {allowed})")
        return ratio_result(
            successes,
            trials,
            errors,
            {"exhausted": exhausted, "failure_bound": learning_failure_bound(budget)},
        )


WORD_PROBLEM_ERROR_LIMIT = 10


def word_problem_batch(task: tuple[int, int, int, int]) -> tuple[int, int, int, list[str]]:
    """``(correct, runs, exhausted, errors)`` for every string of one length.

    ``task`` is ``(seed, length, strings, budget)``; the batch draws from its own
    ``(seed, length)`` stream so batches can run in any process and any order.
    """
    seed, length, strings, budget = task
    rng = np.random.default_rng([seed, length])
    errors: list[str] = []
    correct = runs = exhausted = 0
    honest = HonestPCliffOracle()
    for index in range(strings):
        bits = tuple(int(b) for b in rng.integers(0, 2, size=length))
        weight = sum(bits)
        for oracle in (honest, adversary(seed + length * 1000 + index, length)):
            for modulus, solver in ((2, solve_parity), (3, solve_mod3)):
                runs += 1
                try:
                    answer = solver(oracle, bits, budget=budget, rng=rng)
                except BudgetExhaustedError:
                    exhausted += 1
                    continue
                if answer == weight % modulus:
                    correct += 1
                elif len(errors) < WORD_PROBLEM_ERROR_LIMIT:
                    bit_text = "".join(map(str, bits))
                    errors.append(f"mod {modulus} of {bit_text}: got {answer}")
    return correct, runs, exhausted, errors


class WordProblemCheck(PropertyCheck):
    """PARITY and MOD_3 against popcount, with honest and adversarial oracles.

    Each string length is one batch; with ``verify.workers`` other than 1 the
    batches run on a process pool, longest first.
    """

    def __init__(self) -> None:
        super().__init__("word_problems", 10)

    def run(self, config: ToolkitConfig, seed: int) -> CheckResult:
        settings = config.verify
        budget = config.run.budget
        tasks = [
            (seed, length, settings.word_problem_strings, budget)
            for length in range(settings.word_problem_max_length, 0, -1)
        ]
        workers = min(settings.workers or os.cpu_count() or 1, len(tasks))
        if workers > 1:
            logger.info("word problems: %d batches on %d processes", len(tasks), workers)
            with multiprocessing.Pool(workers) as pool:
                batches = pool.map(word_problem_batch, tasks, chunksize=1)
        else:
            batches = [word_problem_batch(task) for task in tasks]

        errors: list[str] = []
        correct = runs = exhausted = 0
        for batch_correct, batch_runs, batch_exhausted, batch_errors in reversed(batches):
            correct += batch_correct
            runs += batch_runs
            exhausted += batch_exhausted
            errors.extend(batch_errors[: WORD_PROBLEM_ERROR_LIMIT - len(errors)])
        allowed = 1 + int(10 * runs * learning_failure_bound(budget))
        if exhausted > allowed:
            errors.append(f"{exhausted} of {runs} runs exhausted the budget (allowed {allowed})")
        logger.info("word problems: %d/%d correct, %d exhausted", correct, runs, exhausted)
        return ratio_result(correct, runs - exhausted, errors, {"exhausted": exhausted, "runs": runs})
