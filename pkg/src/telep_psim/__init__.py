"""Possibilistic simulation of Clifford gate-teleportation circuits."""

__version__ = "0.1.0"

from .bell_states import SignedPauli2, StabilizerPair, expectation, state_of
from .circuits import (
    CorrectionTable,
    PCliffInstance,
    TelepInstance,
    TelepOutcome,
    pcliff_prob,
    telep_prob,
)
from .config import ToolkitConfig, get_config, reload_config
from .errors import (
    BudgetExhaustedError,
    InvalidInputError,
    OracleContractError,
    TelepPsimError,
)
from .group_core import (
    Clifford1,
    PauliLabel,
    SignedPauli1,
    all_cliffords,
    clifford_compose,
    clifford_product,
    decode_clifford,
    encode_clifford,
)
from .reduction import EmbeddingParams, algorithm_a, algorithm_b, embed
from .tomography import learn_nonstabilizer, learn_stabilizer_pair, uniform_nonstabilizer
from .word_problems import solve_mod3, solve_parity, solve_word_problem

__all__ = [
    "BudgetExhaustedError",
    "Clifford1",
    "CorrectionTable",
    "EmbeddingParams",
    "InvalidInputError",
    "OracleContractError",
    "PCliffInstance",
    "PauliLabel",
    "SignedPauli1",
    "SignedPauli2",
    "StabilizerPair",
    "TelepInstance",
    "TelepOutcome",
    "TelepPsimError",
    "ToolkitConfig",
    "algorithm_a",
    "algorithm_b",
    "all_cliffords",
    "clifford_compose",
    "clifford_product",
    "decode_clifford",
    "embed",
    "encode_clifford",
    "expectation",
    "get_config",
    "learn_nonstabilizer",
    "learn_stabilizer_pair",
    "pcliff_prob",
    "reload_config",
    "solve_mod3",
    "solve_parity",
    "solve_word_problem",
    "state_of",
    "telep_prob",
    "uniform_nonstabilizer",
]
