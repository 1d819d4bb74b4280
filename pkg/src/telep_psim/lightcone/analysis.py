"""Lightcones, locality and the L-good / limited-signaling index sets.

Blocks are 0-indexed. "The first L output blocks" is ``{0, ..., L-1}`` and the
upper half of ``n`` blocks is ``{n // 2, ..., n - 1}`` (``ceil(n/2)`` blocks).
Lightcones are syntactic: reachability in the gate DAG.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Any, Iterable

from ..errors import InvalidInputError, NoValidIndexError, SizeLimitError
from .block_circuit import BlockCircuit

logger = logging.getLogger(__name__)

SEMANTIC_MAX_INPUT_BITS = 16


@lru_cache(maxsize=32)
def backward_lightcones(c: BlockCircuit) -> tuple[frozenset[int], ...]:
    """Input blocks feeding each output block, in one topological pass."""
    support: dict[int, frozenset[int]] = {
        bit: frozenset((bit // c.k,)) for bit in range(c.input_bit_count)
    }
    for gate in c.gate_order:
        reached: set[int] = set()
        for wire in gate.inputs:
            reached.update(support[wire])
        support[gate.output] = frozenset(reached)
    cones: list[frozenset[int]] = []
    for block in range(c.s):
        reached = set()
        for bit in c.output_bits(block):
            reached.update(support[bit])
        cones.append(frozenset(reached))
    return tuple(cones)


@lru_cache(maxsize=32)
def forward_lightcones(c: BlockCircuit) -> tuple[frozenset[int], ...]:
    """Output blocks influenced by each input block (the dual of the backward cones)."""
    forward: list[set[int]] = [set() for _ in range(c.n)]
    for output, cone in enumerate(backward_lightcones(c)):
        for block in cone:
            forward[block].add(output)
    return tuple(frozenset(cone) for cone in forward)


def forward_lightcone(c: BlockCircuit, j: int) -> frozenset[int]:
    if not 0 <= j < c.n:
        raise InvalidInputError(f"Input block {j} out of range 0..{c.n - 1}")
    return forward_lightcones(c)[j]


def backward_lightcone(c: BlockCircuit, o: int) -> frozenset[int]:
    if not 0 <= o < c.s:
        raise InvalidInputError(f"Output block {o} out of range 0..{c.s - 1}")
    return backward_lightcones(c)[o]


def forward_lightcone_of(c: BlockCircuit, blocks: Iterable[int]) -> frozenset[int]:
    reached: set[int] = set()
    for block in blocks:
        reached.update(forward_lightcone(c, block))
    return frozenset(reached)


def backward_lightcone_of(c: BlockCircuit, outputs: Iterable[int]) -> frozenset[int]:
    """Input blocks that determine the given output blocks."""
    reached: set[int] = set()
    for output in outputs:
        reached.update(backward_lightcone(c, output))
    return frozenset(reached)


def locality(c: BlockCircuit) -> int:
    return max((len(cone) for cone in backward_lightcones(c)), default=0)


def locality_bound(c: BlockCircuit) -> int:
    """Structural bound on backward cones: each of r bits reads at most nu**depth input bits."""
    return min(c.n, c.r * c.nu**c.depth)


def good_set(c: BlockCircuit, L: int) -> frozenset[int]:
    """Input blocks whose forward lightcone misses the first ``L`` output blocks."""
    if not 0 <= L <= c.n:
        raise InvalidInputError(f"L={L} must lie in 0..{c.n}")
    return frozenset(
        j for j, cone in enumerate(forward_lightcones(c)) if all(o >= L for o in cone)
    )


def bad_set(c: BlockCircuit, L: int) -> frozenset[int]:
    return frozenset(range(c.n)) - good_set(c, L)


def limited_signaling_set(c: BlockCircuit, ell: int, factor: int = 8) -> frozenset[int]:
    """Input blocks influencing at most ``factor * ell`` output blocks."""
    return frozenset(
        j for j, cone in enumerate(forward_lightcones(c)) if len(cone) <= factor * ell
    )


def upper_half(blocks: Iterable[int], n: int) -> frozenset[int]:
    return frozenset(j for j in blocks if j >= n // 2)


def counting_window(n: int, ell: int, divisor: int = 4) -> int:
    return n // (divisor * max(1, ell))


@dataclass(frozen=True)
class LightconeReport:
    n: int
    s: int
    L: int
    ell: int
    forward: tuple[frozenset[int], ...]
    backward: tuple[frozenset[int], ...]
    good: frozenset[int]
    bad: frozenset[int]
    limited_signaling: frozenset[int]

    @property
    def good_high(self) -> frozenset[int]:
        return upper_half(self.good, self.n)

    @property
    def good_low(self) -> frozenset[int]:
        return self.good - self.good_high

    @property
    def limited_high(self) -> frozenset[int]:
        return upper_half(self.limited_signaling, self.n)

    @property
    def good_limited_high(self) -> frozenset[int]:
        return self.good_high & self.limited_high

    def meets_counting_bounds(self) -> bool:
        """``|Good_>| >= n/4``, ``|Limited_>| >= 3n/8`` and their overlap ``>= n/8``."""
        return (
            4 * len(self.good_high) >= self.n
            and 8 * len(self.limited_high) >= 3 * self.n
            and 8 * len(self.good_limited_high) >= self.n
        )

    def to_dict(self, include_sets: bool = False) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "n": self.n,
            "s": self.s,
            "L": self.L,
            "ell": self.ell,
            "good": len(self.good),
            "bad": len(self.bad),
            "limited_signaling": len(self.limited_signaling),
            "good_high": len(self.good_high),
            "limited_high": len(self.limited_high),
            "good_limited_high": len(self.good_limited_high),
            "meets_counting_bounds": self.meets_counting_bounds(),
        }
        if include_sets:
            payload["sets"] = {
                "good": sorted(self.good),
                "limited_signaling": sorted(self.limited_signaling),
                "forward": [sorted(cone) for cone in self.forward],
                "backward": [sorted(cone) for cone in self.backward],
            }
        return payload


def analyze_lightcones(
    c: BlockCircuit,
    L: int | None = None,
    divisor: int = 4,
    signaling_factor: int = 8,
) -> LightconeReport:
    ell = max(1, locality(c))
    window = counting_window(c.n, ell, divisor) if L is None else L
    report = LightconeReport(
        n=c.n,
        s=c.s,
        L=window,
        ell=ell,
        forward=forward_lightcones(c),
        backward=backward_lightcones(c),
        good=good_set(c, window),
        bad=bad_set(c, window),
        limited_signaling=limited_signaling_set(c, ell, signaling_factor),
    )
    logger.info(
        "lightcones n=%d ell=%d L=%d good_high=%d limited_high=%d",
        c.n,
        ell,
        window,
        len(report.good_high),
        len(report.limited_high),
    )
    return report


def select_embedding_params(
    c: BlockCircuit,
    divisor: int = 8,
    signaling_factor: int = 8,
) -> tuple[int, int, frozenset[int]]:
    """``(L, m, J)`` for a candidate Telep simulator circuit.

    ``L = n // (divisor * ell)``; ``m`` is the smallest index above ``n/2`` whose
    forward lightcone avoids the first L outputs and has at most
    ``signaling_factor * ell`` blocks; ``J`` is that forward lightcone.
    """
    if c.k != 5 or c.r != 2 or c.s != c.n:
        raise InvalidInputError("Embedding parameters need a Telep simulator circuit (k=5, r=2, s=n)")
    ell = max(1, locality(c))
    L = c.n // (divisor * ell)
    if L < 1:
        raise NoValidIndexError(f"n={c.n} is too small for ell={ell}: prefix window is empty")
    forward = forward_lightcones(c)
    for m in range(max(L, c.n // 2 + 1), c.n):
        cone = forward[m]
        if len(cone) <= signaling_factor * ell and all(o >= L for o in cone):
            logger.info("embedding params L=%d m=%d |J|=%d", L, m, len(cone))
            return L, m, cone
    raise NoValidIndexError(f"No L-good limited-signaling index above n/2 (n={c.n}, ell={ell})")


def semantic_influence(c: BlockCircuit) -> tuple[frozenset[int], ...]:
    """Input blocks that can actually change each output block, by brute force."""
    if c.input_bit_count > SEMANTIC_MAX_INPUT_BITS:
        raise SizeLimitError(
            f"Semantic influence limited to {SEMANTIC_MAX_INPUT_BITS} input bits"
        )
    influence: list[set[int]] = [set() for _ in range(c.s)]
    for bits in product((0, 1), repeat=c.input_bit_count):
        base = c.evaluate(bits)
        for block in range(c.n):
            for pattern in range(1, 2**c.k):
                variant = list(bits)
                for offset, bit in enumerate(c.input_bits(block)):
                    if (pattern >> offset) & 1:
                        variant[bit] ^= 1
                changed = c.evaluate(variant)
                for output in range(c.s):
                    lo, hi = output * c.r, (output + 1) * c.r
                    if changed[lo:hi] != base[lo:hi]:
                        influence[output].add(block)
    return tuple(frozenset(cone) for cone in influence)
