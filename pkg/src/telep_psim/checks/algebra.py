"""Exact algebra checks: group structure, Born rule and the magic square."""

from __future__ import annotations

import numpy as np

from ..bell_states import IDENTITY2, SignedPauli2, conjugate_pair, pauli2_mul
from ..circuits.distributions import pcliff_distribution, telep_distribution
from ..circuits.models import CorrectionTable, PCliffInstance, TelepInstance
from ..circuits.statevector import pcliff_statevector_distribution, statevector_distribution
from ..config import ToolkitConfig
from ..group_core import (
    IDENTITY,
    all_cliffords,
    clifford_compose,
    clifford_inverse,
    clifford_matrix,
    quotient_s3,
    random_cliffords,
)
from ..tomography import LINES, line_setting, magic_square, sign_assignment_exists
from .base import CheckResult, PropertyCheck, ratio_result

BORN_RULE_MAX_N = 4
MINUS_IDENTITY2 = SignedPauli2(IDENTITY2.left, IDENTITY2.right, 2)


class GroupExactnessCheck(PropertyCheck):
    def __init__(self) -> None:
        super().__init__("group_exactness", 1)

    def run(self, config: ToolkitConfig, seed: int) -> CheckResult:
        elements = all_cliffords()
        members = set(elements)
        errors: list[str] = []
        passed = 0
        total = 0
        for c in elements:
            total += 1
            if (
                clifford_compose(IDENTITY, c) == c
                and clifford_compose(c, IDENTITY) == c
                and clifford_compose(c, clifford_inverse(c)) == IDENTITY
            ):
                passed += 1
            else:
                errors.append(f"identity/inverse law fails for {c}")
        for a in elements:
            for b in elements:
                total += 1
                product = clifford_compose(a, b)
                overlap = np.trace(
                    clifford_matrix(product).conj().T @ clifford_matrix(a) @ clifford_matrix(b)
                )
                ok = (
                    product in members
                    and quotient_s3(product) == quotient_s3(a).compose(quotient_s3(b))
                    and abs(abs(overlap) - 2.0) <= config.simulation.tolerance
                )
                if ok:
                    passed += 1
                else:
                    errors.append(f"product {a} * {b} breaks closure, quotient or matrix agreement")
        return ratio_result(passed, total, errors[:10], {"elements": len(members)})


class BornRuleCheck(PropertyCheck):
    """Exact probabilities agree with dense state-vector simulation."""

    def __init__(self) -> None:
        super().__init__("born_rule", 2)

    def run(self, config: ToolkitConfig, seed: int) -> CheckResult:
        settings = config.verify
        tol = config.simulation.tolerance
        rng = np.random.default_rng(seed)
        errors: list[str] = []
        passed = total = 0
        for n in range(1, min(BORN_RULE_MAX_N, config.simulation.statevector_max_n) + 1):
            for _ in range(settings.born_rule_instances):
                total += 1
                inst = TelepInstance(random_cliffords(rng, n))
                exact = telep_distribution(inst)
                dense = statevector_distribution(inst, max_n=config.simulation.statevector_max_n)
                worst = max(abs(exact[out] - dense[out]) for out in exact)
                if worst <= tol and abs(sum(exact.values()) - 1.0) <= tol:
                    passed += 1
                else:
                    errors.append(f"telep {inst.to_dict()} deviates by {worst:.3e}")
        for _ in range(settings.born_rule_pcliff_instances):
            total += 1
            L = int(rng.integers(1, 3))
            table = CorrectionTable.random(L, rng)
            inst = PCliffInstance(random_cliffords(rng, L), random_cliffords(rng, 1)[0])
            exact = pcliff_distribution(table, inst)
            dense = pcliff_statevector_distribution(table, inst)
            worst = max(abs(exact[label] - dense[label]) for label in exact)
            if worst <= tol and abs(sum(exact.values()) - 1.0) <= tol:
                passed += 1
            else:
                errors.append(f"pcliff {inst.to_dict()} deviates by {worst:.3e}")
        return ratio_result(passed, total, errors[:10])


class MagicSquareCheck(PropertyCheck):
    def __init__(self) -> None:
        super().__init__("magic_square", 6)

    def run(self, config: ToolkitConfig, seed: int) -> CheckResult:
        square = magic_square()
        errors: list[str] = []
        passed = total = 0
        for line in LINES:
            total += 2
            expected = MINUS_IDENTITY2 if line.axis == "row" else IDENTITY2
            product = square.line_product(line)
            if product == expected:
                passed += 1
            else:
                errors.append(f"{line} multiplies to {product}, expected {expected}")
            setting = line_setting(line)
            rotation = setting.rotation
            xx = conjugate_pair(rotation.d_a, rotation.d_b, SignedPauli2.parse("XX"))
            zz = conjugate_pair(rotation.d_a, rotation.d_b, SignedPauli2.parse("ZZ"))
            measured = {xx.unsigned(), zz.unsigned(), pauli2_mul(xx, zz).unsigned()}
            entries = {square.entry(r, c).unsigned() for r, c in line.positions}
            if measured == entries:
                passed += 1
            else:
                errors.append(f"{line} frame measures {sorted(p.key() for p in measured)}")
        total += 1
        if sign_assignment_exists():
            errors.append("found a +-1 assignment satisfying every line")
        else:
            passed += 1
        return ratio_result(
            passed,
            total,
            errors,
            {"settings": {str(line): line_setting(line).to_dict() for line in LINES}},
        )
