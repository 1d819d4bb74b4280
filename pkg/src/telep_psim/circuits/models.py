"""Instances, outcomes and correction functions for Telep_n and CliffP(Q)_L."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from ..errors import InvalidEncodingError, InvalidInputError, LengthMismatchError
from ..group_core import (
    Clifford1,
    PauliLabel,
    clifford_product,
    decode_clifford,
    decode_pauli,
    encode_clifford,
)

CorrectionFn = Callable[[Sequence[Clifford1]], PauliLabel]

_SEED_MASK = (1 << 64) - 1


def instance_digest(seed: int, codes: Sequence[int]) -> int:
    """Uniform 64-bit value fixed by ``(seed, codes)``.

    Seeded oracles and hashed corrections draw their per-instance randomness here.
    """
    data = (int(seed) & _SEED_MASK).to_bytes(8, "little") + bytes(codes)
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")


def _code(value: Any, what: str = "Clifford") -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer, str)):
        raise InvalidEncodingError(f"{what} code must be an integer: {value!r}")
    try:
        return int(value)
    except ValueError as exc:
        raise InvalidEncodingError(f"{what} code must be an integer: {value!r}") from exc


def _code_list(values: Any, what: str = "cliffords") -> list[Any]:
    if not isinstance(values, (list, tuple)):
        raise InvalidInputError(f"'{what}' must be a list of codes, got {type(values).__name__}")
    return list(values)


def _decode_codes(values: Iterable[Any]) -> tuple[Clifford1, ...]:
    return tuple(decode_clifford(_code(value)) for value in values)


@dataclass(frozen=True)
class TelepInstance:
    """Input ``(C_0, ..., C_{n-1})`` of the cyclic teleportation circuit."""

    cliffords: tuple[Clifford1, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cliffords", tuple(self.cliffords))
        if not self.cliffords:
            raise InvalidInputError("Telep instance needs n >= 1")

    @classmethod
    def from_codes(cls, codes: Iterable[int]) -> TelepInstance:
        return cls(_decode_codes(codes))

    @property
    def n(self) -> int:
        return len(self.cliffords)

    def codes(self) -> tuple[int, ...]:
        return tuple(encode_clifford(c) for c in self.cliffords)

    def product(self) -> Clifford1:
        return clifford_product(self.cliffords)

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "cliffords": list(self.codes())}

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> TelepInstance:
        if "cliffords" not in payload:
            raise InvalidInputError("Telep instance is missing 'cliffords'")
        instance = cls.from_codes(_code_list(payload["cliffords"]))
        if "n" in payload and _code(payload["n"], "Length") != instance.n:
            raise LengthMismatchError(
                f"Declared n={payload['n']} but {instance.n} cliffords given"
            )
        return instance


@dataclass(frozen=True)
class TelepOutcome:
    paulis: tuple[PauliLabel, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "paulis", tuple(PauliLabel(p) for p in self.paulis))

    @classmethod
    def identity(cls, n: int) -> TelepOutcome:
        return cls((PauliLabel.I,) * n)

    @classmethod
    def parse(cls, text: str) -> TelepOutcome:
        return cls(tuple(PauliLabel.parse(ch) for ch in text.strip()))

    @property
    def n(self) -> int:
        return len(self.paulis)

    def key(self) -> str:
        return "".join(p.name for p in self.paulis)

    def to_dict(self) -> dict[str, Any]:
        return {"paulis": [int(p) for p in self.paulis]}

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> TelepOutcome:
        codes = _code_list(payload.get("paulis", []), "paulis")
        return cls(tuple(decode_pauli(_code(code, "Pauli")) for code in codes))


@dataclass(frozen=True)
class PCliffInstance:
    """Input ``(C_1, ..., C_L, D)`` of the Pauli-corrected Clifford circuit."""

    cliffords: tuple[Clifford1, ...]
    d: Clifford1
    _product: Clifford1 | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "cliffords", tuple(self.cliffords))
        if not self.cliffords:
            raise InvalidInputError("CliffP instance needs L >= 1")
        if self._product is None:
            object.__setattr__(self, "_product", clifford_product(self.cliffords))

    @property
    def L(self) -> int:
        return len(self.cliffords)

    def codes(self) -> tuple[int, ...]:
        return tuple(encode_clifford(c) for c in self.cliffords) + (encode_clifford(self.d),)

    def product(self) -> Clifford1:
        return self._product  # type: ignore[return-value]

    def with_d(self, d: Clifford1) -> PCliffInstance:
        """Same Clifford sequence measured in another Bell frame."""
        return replace(self, d=d)

    def to_dict(self) -> dict[str, Any]:
        return {
            "L": self.L,
            "cliffords": [encode_clifford(c) for c in self.cliffords],
            "d": encode_clifford(self.d),
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> PCliffInstance:
        if "cliffords" not in payload or "d" not in payload:
            raise InvalidInputError("CliffP instance needs 'cliffords' and 'd'")
        instance = cls(
            _decode_codes(_code_list(payload["cliffords"])), decode_clifford(_code(payload["d"]))
        )
        if "L" in payload and _code(payload["L"], "Length") != instance.L:
            raise LengthMismatchError(
                f"Declared L={payload['L']} but {instance.L} cliffords given"
            )
        return instance


def identity_correction(cliffords: Sequence[Clifford1]) -> PauliLabel:
    return PauliLabel.I


@dataclass(frozen=True)
class HashedCorrection:
    """Pseudo-random correction function of any length, fixed by ``seed``."""

    seed: int = 0

    def __call__(self, cliffords: Sequence[Clifford1]) -> PauliLabel:
        codes = [encode_clifford(c) for c in cliffords]
        return PauliLabel(instance_digest(self.seed, codes) >> 62)


def _table_key(codes: Iterable[int]) -> str:
    return ",".join(str(code) for code in codes)


@dataclass
class CorrectionTable:
    """Explicit correction function ``Q(C_1, ..., C_L)`` keyed by Clifford codes.

    Lookups outside ``entries`` fall back to ``default``; without a default the
    table must be total.
    """

    L: int
    entries: dict[tuple[int, ...], PauliLabel] = field(default_factory=dict)
    default: PauliLabel | None = None

    def __call__(self, cliffords: Sequence[Clifford1]) -> PauliLabel:
        if len(cliffords) != self.L:
            raise LengthMismatchError(f"Correction table expects L={self.L}, got {len(cliffords)}")
        key = tuple(encode_clifford(c) for c in cliffords)
        if key in self.entries:
            return self.entries[key]
        if self.default is None:
            raise InvalidInputError(f"Correction table has no entry for {_table_key(key)}")
        return self.default

    @classmethod
    def random(cls, L: int, seed: int | np.random.Generator = 0) -> CorrectionTable:
        if not 1 <= L <= 3:
            raise InvalidInputError("Random correction tables are limited to 1 <= L <= 3")
        rng = np.random.default_rng(seed)
        values = rng.integers(0, 4, size=24**L)
        keys = np.ndindex(*(24,) * L)
        return cls(L=L, entries={key: PauliLabel(int(v)) for key, v in zip(keys, values)})

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "L": self.L,
            "entries": {_table_key(key): int(value) for key, value in sorted(self.entries.items())},
        }
        if self.default is not None:
            payload["default"] = int(self.default)
        return payload

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> CorrectionTable:
        if "L" not in payload:
            raise InvalidInputError("Correction table is missing 'L'")
        L = _code(payload["L"], "Length")
        raw_entries = payload.get("entries", {})
        if not isinstance(raw_entries, dict):
            raise InvalidInputError("Correction table 'entries' must be an object")
        entries: dict[tuple[int, ...], PauliLabel] = {}
        for raw_key, value in raw_entries.items():
            key = tuple(_code(part.strip()) for part in str(raw_key).split(",") if part.strip())
            if len(key) != L:
                raise LengthMismatchError(f"Entry {raw_key!r} does not have L={L} codes")
            for code in key:
                decode_clifford(code)
            entries[key] = decode_pauli(_code(value, "Pauli"))
        default = payload.get("default")
        if default is not None:
            default = decode_pauli(_code(default, "Pauli"))
        return cls(L=L, entries=entries, default=default)

    @classmethod
    def load(cls, path: Path) -> CorrectionTable:
        return cls.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def write(self, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path
