"""Bounded fan-in circuits and their lightcone structure."""

from .analysis import (
    LightconeReport,
    analyze_lightcones,
    backward_lightcone,
    backward_lightcone_of,
    backward_lightcones,
    bad_set,
    counting_window,
    forward_lightcone,
    forward_lightcone_of,
    forward_lightcones,
    good_set,
    limited_signaling_set,
    locality,
    locality_bound,
    select_embedding_params,
    semantic_influence,
    upper_half,
)
from .block_circuit import BlockCircuit, Gate
from .generators import constant_circuit, random_local_circuit, wire_identity

__all__ = [
    "BlockCircuit",
    "Gate",
    "LightconeReport",
    "analyze_lightcones",
    "backward_lightcone",
    "backward_lightcone_of",
    "backward_lightcones",
    "bad_set",
    "constant_circuit",
    "counting_window",
    "forward_lightcone",
    "forward_lightcone_of",
    "forward_lightcones",
    "good_set",
    "limited_signaling_set",
    "locality",
    "locality_bound",
    "random_local_circuit",
    "select_embedding_params",
    "semantic_influence",
    "upper_half",
]
