"""64-bit MELG generators: bit-exact core, period/equidistribution
verification, polynomial jump-ahead, and a parameter search pipeline."""

from .params import PARAMS, GeneratorParams, ParameterError, get_params
from .core import (
    Melg,
    MelgState,
    StateError,
    generate_block,
    init_array,
    init_seed,
    step,
    step_inplace,
    to_f52_ieee,
    to_f53_mult,
)

__all__ = [
    "PARAMS",
    "GeneratorParams",
    "ParameterError",
    "get_params",
    "Melg",
    "MelgState",
    "StateError",
    "generate_block",
    "init_array",
    "init_seed",
    "step",
    "step_inplace",
    "to_f52_ieee",
    "to_f53_mult",
]

__version__ = "0.1.0"
