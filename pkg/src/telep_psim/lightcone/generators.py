"""Circuit families used as Telep simulator candidates and analysis fixtures."""

from __future__ import annotations

import logging
from typing import Iterator

import numpy as np

from ..errors import InvalidInputError
from .block_circuit import BlockCircuit, Gate

logger = logging.getLogger(__name__)


def wire_identity(n: int, k: int = 1, r: int | None = None) -> BlockCircuit:
    """Output bit i of block j is input bit i of block j; no gates."""
    r = k if r is None else r
    if not 1 <= r <= k:
        raise InvalidInputError(f"wire identity needs 1 <= r <= k, got r={r}, k={k}")
    outputs = tuple(j * k + i for j in range(n) for i in range(r))
    return BlockCircuit(n=n, s=n, k=k, r=r, nu=1, depth=0, gates=(), outputs=outputs)


def constant_circuit(
    n: int, s: int | None = None, k: int = 5, r: int = 2, value: int = 0
) -> BlockCircuit:
    """Every output block equals ``value``, built from fan-in-0 gates."""
    s = n if s is None else s
    if not 0 <= value < 2**r:
        raise InvalidInputError(f"value {value} does not fit in {r} bits")
    next_id = n * k
    gates: list[Gate] = []
    for _ in range(s):
        for i in range(r):
            gates.append(Gate(inputs=(), output=next_id, table=((value >> i) & 1,)))
            next_id += 1
    return BlockCircuit(
        n=n,
        s=s,
        k=k,
        r=r,
        nu=0,
        depth=1,
        gates=tuple(gates),
        outputs=tuple(gate.output for gate in gates),
    )


def random_local_circuit(
    n: int,
    ell: int,
    k: int = 1,
    r: int = 1,
    nu: int = 2,
    depth: int = 1,
    s: int | None = None,
    seed: int | np.random.Generator = 0,
) -> BlockCircuit:
    """Random circuit in which output block o only reads ``ell`` chosen input blocks.

    Each output bit is a complete fan-in-``nu`` tree of the given depth whose
    leaves are bits of those blocks, with uniformly random truth tables. The
    result is at most ``ell``-local.
    """
    s = n if s is None else s
    if not 1 <= ell <= n:
        raise InvalidInputError(f"ell must lie in 1..{n}, got {ell}")
    if depth > 0 and nu < 1:
        raise InvalidInputError("Trees of positive depth need nu >= 1")
    rng = np.random.default_rng(seed)
    gates: list[Gate] = []
    next_id = n * k
    leaves_per_tree = nu**depth
    gates_per_tree = sum(nu**level for level in range(depth))

    def build(level: int, picks: Iterator[int], tables: Iterator[list[int]]) -> int:
        nonlocal next_id
        if level == 0:
            return next(picks)
        inputs = tuple(build(level - 1, picks, tables) for _ in range(nu))
        gate = Gate(inputs=inputs, output=next_id, table=tuple(next(tables)))
        next_id += 1
        gates.append(gate)
        return gate.output

    outputs: list[int] = []
    offsets = np.arange(k)
    for _ in range(s):
        # leaf bits and truth tables for all r trees of this output block in one draw each
        blocks = rng.choice(n, size=ell, replace=False)
        leaves = (blocks[:, None] * k + offsets).ravel()
        picks = iter(leaves[rng.integers(0, leaves.size, size=r * leaves_per_tree)].tolist())
        tables = iter(rng.integers(0, 2, size=(r * gates_per_tree, 2**nu)).tolist())
        outputs.extend(build(depth, picks, tables) for _ in range(r))

    circuit = BlockCircuit(
        n=n, s=s, k=k, r=r, nu=nu, depth=depth, gates=tuple(gates), outputs=tuple(outputs)
    )
    logger.debug("random local circuit n=%d ell=%d gates=%d", n, ell, len(gates))
    return circuit
