"""Telep_n and CliffP(Q)_L: distributions, oracles and validation backends."""

from .distributions import (
    last_factor_weights,
    most_likely_telep_outcome,
    pcliff_distribution,
    pcliff_prob,
    pcliff_product,
    pcliff_support,
    pcliff_trace,
    pcliff_weights,
    sample_telep_outcome,
    telep_distribution,
    telep_prob,
    telep_product,
    telep_support,
    telep_trace,
    trace_weight,
)
from .falsifier import FalsificationResult, falsify_simulator, run_falsifier
from .models import (
    CorrectionFn,
    CorrectionTable,
    HashedCorrection,
    PCliffInstance,
    TelepInstance,
    TelepOutcome,
    identity_correction,
    instance_digest,
)
from .oracles import (
    AdversarialPCliffOracle,
    AdversarialTelepOracle,
    CircuitTelepOracle,
    ConstantTelepOracle,
    CountingOracle,
    HonestPCliffOracle,
    HonestTelepOracle,
    PossibilisticOracle,
    SupportCheckedOracle,
    TableOracle,
    adversarial_oracle,
    honest_oracle,
)
from .statevector import pcliff_statevector_distribution, statevector_distribution

__all__ = [
    "AdversarialPCliffOracle",
    "AdversarialTelepOracle",
    "CircuitTelepOracle",
    "ConstantTelepOracle",
    "CorrectionFn",
    "CorrectionTable",
    "CountingOracle",
    "FalsificationResult",
    "HashedCorrection",
    "HonestPCliffOracle",
    "HonestTelepOracle",
    "PCliffInstance",
    "PossibilisticOracle",
    "SupportCheckedOracle",
    "TableOracle",
    "TelepInstance",
    "TelepOutcome",
    "adversarial_oracle",
    "falsify_simulator",
    "honest_oracle",
    "identity_correction",
    "instance_digest",
    "last_factor_weights",
    "most_likely_telep_outcome",
    "pcliff_distribution",
    "pcliff_prob",
    "pcliff_product",
    "pcliff_statevector_distribution",
    "pcliff_support",
    "pcliff_trace",
    "pcliff_weights",
    "run_falsifier",
    "sample_telep_outcome",
    "statevector_distribution",
    "telep_distribution",
    "telep_prob",
    "telep_product",
    "telep_support",
    "telep_trace",
    "trace_weight",
]
