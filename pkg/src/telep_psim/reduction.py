"""Embedding CliffP(Q)_L into Telep_n and reading a PSIM answer back out.

An instance ``(C_1..C_L, D)`` becomes the Telep input whose first L Cliffords
are ``C_1..C_L``, whose position ``m`` holds ``D`` and which is the identity
elsewhere. The outcomes indexed by ``J`` determine the answer P; the remaining
outcomes together with ``C_1..C_L`` determine the correction Q, and

    |tr(P_{n-1} C'_{n-1} ... P_0 C'_0)| == |tr(P D Q C_L ... C_1)|.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from itertools import product
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .circuits.distributions import telep_trace
from .circuits.models import CorrectionTable, PCliffInstance, TelepInstance, TelepOutcome
from .errors import InvalidInputError, LengthMismatchError
from .group_core import (
    IDENTITY,
    Clifford1,
    PauliLabel,
    SignedPauli1,
    all_cliffords,
    clifford_compose,
    clifford_inverse,
    clifford_matrix,
    clifford_product,
    conjugate_pauli,
    pauli_clifford,
    pauli_mul,
    pauli_part,
    pauli_product,
)
from .lightcone.analysis import forward_lightcone, locality, select_embedding_params
from .lightcone.block_circuit import BlockCircuit

logger = logging.getLogger(__name__)

TelepOracleFn = Callable[[TelepInstance], TelepOutcome]

INDUCED_TABLE_MAX_L = 2


@dataclass(frozen=True)
class EmbeddingParams:
    """``(n, L, m, J)`` with ``L <= m < n`` and ``J`` inside ``{L, ..., n-1}``."""

    n: int
    L: int
    m: int
    J: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "J", frozenset(int(j) for j in self.J))
        if self.L < 1:
            raise InvalidInputError(f"L must be at least 1, got {self.L}")
        if not self.L <= self.m < self.n:
            raise InvalidInputError(f"Need L <= m < n, got L={self.L} m={self.m} n={self.n}")
        outside = sorted(j for j in self.J if not self.L <= j < self.n)
        if outside:
            raise InvalidInputError(f"J entries {outside} fall outside {self.L}..{self.n - 1}")

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "L": self.L, "m": self.m, "J": sorted(self.J)}

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> EmbeddingParams:
        try:
            return cls(
                n=int(payload["n"]),
                L=int(payload["L"]),
                m=int(payload["m"]),
                J=frozenset(int(j) for j in payload["J"]),
            )
        except KeyError as exc:
            raise InvalidInputError(f"Embedding params are missing {exc.args[0]!r}") from exc


def default_params(L: int, n: int | None = None) -> EmbeddingParams:
    """Black-box defaults: ``m = L`` and ``J`` covers every index from L on."""
    n = L + 2 if n is None else n
    return EmbeddingParams(n=n, L=L, m=L, J=frozenset(range(L, n)))


def params_for_circuit(
    circuit: BlockCircuit, divisor: int = 8, signaling_factor: int = 8
) -> EmbeddingParams:
    L, m, J = select_embedding_params(circuit, divisor=divisor, signaling_factor=signaling_factor)
    return EmbeddingParams(n=circuit.n, L=L, m=m, J=J)


def check_params_for_circuit(
    circuit: BlockCircuit, params: EmbeddingParams, signaling_factor: int = 8
) -> list[str]:
    """Violations of the no-signaling conditions; empty when the params are usable."""
    problems: list[str] = []
    if circuit.n != params.n:
        return [f"circuit has n={circuit.n} but params have n={params.n}"]
    cone = forward_lightcone(circuit, params.m)
    leaked = sorted(o for o in cone if o < params.L)
    if leaked:
        problems.append(f"input block {params.m} influences prefix outputs {leaked}")
    if cone != params.J:
        problems.append(f"J={sorted(params.J)} differs from the forward lightcone {sorted(cone)}")
    ell = max(1, locality(circuit))
    if len(cone) > signaling_factor * ell:
        problems.append(f"|J|={len(cone)} exceeds {signaling_factor}*ell={signaling_factor * ell}")
    return problems


def _labels(labels: Iterable[PauliLabel]) -> list[SignedPauli1]:
    return [SignedPauli1.from_label(label) for label in labels]


def _check_outcome(params: EmbeddingParams, out: TelepOutcome) -> None:
    if out.n != params.n:
        raise LengthMismatchError(f"Outcome has {out.n} paulis, params expect n={params.n}")


def _check_cliffords(params: EmbeddingParams, cliffords: Sequence[Clifford1]) -> None:
    if len(cliffords) != params.L:
        raise LengthMismatchError(f"Expected L={params.L} cliffords, got {len(cliffords)}")


def embed(inst: PCliffInstance, params: EmbeddingParams) -> TelepInstance:
    _check_cliffords(params, inst.cliffords)
    cliffords = list(inst.cliffords) + [IDENTITY] * (params.n - params.L)
    cliffords[params.m] = inst.d
    return TelepInstance(tuple(cliffords))


def algorithm_a(params: EmbeddingParams, out: TelepOutcome, d: Clifford1) -> PauliLabel:
    """Unsigned ``P' D P'' D^-1`` built from the outcomes indexed by J."""
    _check_outcome(params, out)
    upper = pauli_product(
        _labels(out.paulis[j] for j in range(params.m, params.n) if j in params.J)
    )
    lower = pauli_product(
        _labels(out.paulis[q] for q in range(params.L, params.m) if q in params.J)
    )
    return pauli_mul(upper, conjugate_pauli(d, lower)).label


def compute_q_correction(
    params: EmbeddingParams, out: TelepOutcome, cliffords: Sequence[Clifford1]
) -> PauliLabel:
    """Unsigned ``Q'' Q''' (G Q' G^-1)`` for ``G = C_L ... C_1``.

    ``Q'`` and ``Q''`` collect the outcomes outside J above and below ``m``;
    ``Q'''`` is the Pauli left over after pushing ``P_0 .. P_{L-1}`` through
    the prefix Cliffords.
    """
    _check_outcome(params, out)
    _check_cliffords(params, cliffords)
    upper = pauli_product(
        _labels(out.paulis[j] for j in range(params.m, params.n) if j not in params.J)
    )
    lower = pauli_product(
        _labels(out.paulis[q] for q in range(params.L, params.m) if q not in params.J)
    )
    walk = IDENTITY
    for clifford, pauli in zip(cliffords, out.paulis[: params.L]):
        walk = clifford_compose(pauli_clifford(pauli), clifford_compose(clifford, walk))
    g = clifford_product(cliffords)
    leftover = pauli_part(clifford_compose(walk, clifford_inverse(g)))
    if leftover is None:
        raise RuntimeError("prefix walk left the Pauli coset of the product")
    return pauli_product(
        [lower, SignedPauli1.from_label(leftover), conjugate_pauli(g, upper)]
    ).label


def commuting_identity_sides(
    params: EmbeddingParams,
    out: TelepOutcome,
    cliffords: Sequence[Clifford1],
    d: Clifford1,
    q_override: PauliLabel | None = None,
) -> tuple[float, float]:
    """``(|Telep trace|, |tr(P D Q G)|)`` evaluated with matrices."""
    inst = PCliffInstance(tuple(cliffords), d)
    lhs = abs(telep_trace(embed(inst, params), out))
    p = algorithm_a(params, out, d)
    q = compute_q_correction(params, out, cliffords) if q_override is None else q_override
    matrix = clifford_matrix(pauli_clifford(p)) @ clifford_matrix(d)
    matrix = matrix @ clifford_matrix(pauli_clifford(q)) @ clifford_matrix(inst.product())
    return lhs, float(abs(np.trace(matrix)))


def verify_commuting_identity(
    params: EmbeddingParams,
    out: TelepOutcome,
    cliffords: Sequence[Clifford1],
    d: Clifford1,
    tol: float = 1e-9,
    q_override: PauliLabel | None = None,
) -> bool:
    lhs, rhs = commuting_identity_sides(params, out, cliffords, d, q_override=q_override)
    return abs(lhs - rhs) <= tol


def algorithm_b(oracle: TelepOracleFn, params: EmbeddingParams, inst: PCliffInstance) -> PauliLabel:
    """One Telep query on the embedding, decoded by :func:`algorithm_a`."""
    answer = oracle(embed(inst, params))
    _check_outcome(params, answer)
    result = algorithm_a(params, answer, inst.d)
    logger.debug("algorithm_b %s -> %s", inst.to_dict(), result.name)
    return result


class InducedCorrection:
    """The correction function a Telep oracle implicitly commits to.

    Queries the oracle on the embedding with ``D = reference_d`` and applies
    :func:`compute_q_correction`. For a circuit oracle with no-signaling params
    the result does not depend on the reference D.
    """

    def __init__(
        self,
        oracle: TelepOracleFn,
        params: EmbeddingParams,
        reference_d: Clifford1 = IDENTITY,
    ) -> None:
        self.oracle = oracle
        self.params = params
        self.reference_d = reference_d
        self._memo: dict[tuple[Clifford1, ...], PauliLabel] = {}
        self._lock = threading.Lock()

    def __call__(self, cliffords: Sequence[Clifford1]) -> PauliLabel:
        key = tuple(cliffords)
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        answer = self.oracle(embed(PCliffInstance(key, self.reference_d), self.params))
        value = compute_q_correction(self.params, answer, key)
        with self._lock:
            return self._memo.setdefault(key, value)

    def tabulate(self) -> CorrectionTable:
        if self.params.L > INDUCED_TABLE_MAX_L:
            raise InvalidInputError(
                f"Tabulating the induced correction is limited to L <= {INDUCED_TABLE_MAX_L}"
            )
        entries = {
            tuple(c.code for c in cliffords): self(cliffords)
            for cliffords in product(all_cliffords(), repeat=self.params.L)
        }
        return CorrectionTable(L=self.params.L, entries=entries)
