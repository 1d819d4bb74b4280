"""Bounded fan-in circuits computing block functions.

Bit ids ``0 .. n*k - 1`` are the input bits (block j owns ``j*k .. j*k + k - 1``);
every gate writes one new bit id. Output block o is ``outputs[o*r : (o+1)*r]``.
Gate truth tables are indexed little-endian: bit i of the index is the value of
the gate's i-th input. Block values are little-endian too.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Mapping, Sequence

import networkx as nx

from ..errors import InvalidInputError, LengthMismatchError


@dataclass(frozen=True)
class Gate:
    inputs: tuple[int, ...]
    output: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "inputs", tuple(int(i) for i in self.inputs))
        object.__setattr__(self, "table", tuple(int(b) for b in self.table))
        if len(self.table) != 2 ** len(self.inputs):
            raise InvalidInputError(
                f"Gate {self.output}: table needs {2 ** len(self.inputs)} entries, got {len(self.table)}"
            )
        if any(bit not in (0, 1) for bit in self.table):
            raise InvalidInputError(f"Gate {self.output}: table entries must be bits")

    @property
    def fan_in(self) -> int:
        return len(self.inputs)

    def evaluate(self, values: Mapping[int, int]) -> int:
        index = 0
        for position, wire in enumerate(self.inputs):
            index |= values[wire] << position
        return self.table[index]

    def to_dict(self) -> dict[str, Any]:
        return {"inputs": list(self.inputs), "output": self.output, "table": list(self.table)}

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> Gate:
        return cls(
            inputs=tuple(payload.get("inputs", [])),
            output=int(payload["output"]),
            table=tuple(payload["table"]),
        )


@dataclass(frozen=True, eq=False)
class BlockCircuit:
    n: int
    s: int
    k: int
    r: int
    nu: int
    depth: int
    gates: tuple[Gate, ...] = ()
    outputs: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "outputs", tuple(int(b) for b in self.outputs))
        if min(self.n, self.s, self.k, self.r) < 1 or self.nu < 0 or self.depth < 0:
            raise InvalidInputError("Circuit dimensions must be positive")
        if len(self.outputs) != self.s * self.r:
            raise LengthMismatchError(
                f"Expected {self.s * self.r} output bits, got {len(self.outputs)}"
            )
        produced: set[int] = set()
        for gate in self.gates:
            if gate.fan_in > self.nu:
                raise InvalidInputError(f"Gate {gate.output} has fan-in {gate.fan_in} > nu={self.nu}")
            if gate.output < self.input_bit_count or gate.output in produced:
                raise InvalidInputError(f"Gate output id {gate.output} is reused")
            produced.add(gate.output)
        known = produced | set(range(self.input_bit_count))
        for gate in self.gates:
            missing = [wire for wire in gate.inputs if wire not in known]
            if missing:
                raise InvalidInputError(f"Gate {gate.output} reads undeclared bits {missing}")
        undeclared = [bit for bit in self.outputs if bit not in known]
        if undeclared:
            raise InvalidInputError(f"Output bits {undeclared} are not produced")
        if not nx.is_directed_acyclic_graph(self.graph):
            raise InvalidInputError("Circuit graph has a cycle")
        actual = self.measured_depth()
        if actual > self.depth:
            raise InvalidInputError(f"Circuit depth {actual} exceeds declared depth {self.depth}")

    @property
    def input_bit_count(self) -> int:
        return self.n * self.k

    def input_bits(self, block: int) -> range:
        return range(block * self.k, (block + 1) * self.k)

    def output_bits(self, block: int) -> tuple[int, ...]:
        return self.outputs[block * self.r : (block + 1) * self.r]

    @cached_property
    def graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.input_bit_count))
        for gate in self.gates:
            graph.add_node(gate.output)
            graph.add_edges_from((wire, gate.output) for wire in gate.inputs)
        return graph

    @cached_property
    def gate_order(self) -> tuple[Gate, ...]:
        by_output = {gate.output: gate for gate in self.gates}
        return tuple(
            by_output[node] for node in nx.topological_sort(self.graph) if node in by_output
        )

    def measured_depth(self) -> int:
        levels: dict[int, int] = {}
        for gate in self.gate_order:
            levels[gate.output] = 1 + max((levels.get(wire, 0) for wire in gate.inputs), default=0)
        return max(levels.values(), default=0)

    def evaluate(self, bits: Sequence[int]) -> tuple[int, ...]:
        if len(bits) != self.input_bit_count:
            raise LengthMismatchError(f"Expected {self.input_bit_count} input bits, got {len(bits)}")
        values = {index: int(bit) & 1 for index, bit in enumerate(bits)}
        for gate in self.gate_order:
            values[gate.output] = gate.evaluate(values)
        return tuple(values[bit] for bit in self.outputs)

    def evaluate_blocks(self, blocks: Sequence[int]) -> tuple[int, ...]:
        if len(blocks) != self.n:
            raise LengthMismatchError(f"Expected {self.n} input blocks, got {len(blocks)}")
        bits = [(value >> i) & 1 for value in blocks for i in range(self.k)]
        out = self.evaluate(bits)
        return tuple(
            sum(out[o * self.r + i] << i for i in range(self.r)) for o in range(self.s)
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "nu": self.nu,
            "depth": self.depth,
            "k": self.k,
            "r": self.r,
            "n": self.n,
            "s": self.s,
            "gates": [gate.to_dict() for gate in self.gates],
            "outputs": list(self.outputs),
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> BlockCircuit:
        try:
            gates = tuple(Gate.from_dict(item) for item in payload.get("gates", []))
            s, r = int(payload["s"]), int(payload["r"])
            outputs = payload.get("outputs")
            if outputs is None:
                # default: the last s*r gate outputs in listed order
                if len(gates) < s * r:
                    raise InvalidInputError("Circuit without 'outputs' needs at least s*r gates")
                outputs = [gate.output for gate in gates[len(gates) - s * r :]]
            return cls(
                n=int(payload["n"]),
                s=s,
                k=int(payload["k"]),
                r=r,
                nu=int(payload["nu"]),
                depth=int(payload["depth"]),
                gates=gates,
                outputs=tuple(outputs),
            )
        except KeyError as exc:
            raise InvalidInputError(f"Circuit JSON is missing {exc.args[0]!r}") from exc

    @classmethod
    def load(cls, path: Path) -> BlockCircuit:
        return cls.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def write(self, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")
        return path
