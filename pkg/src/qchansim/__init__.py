"""Single-qubit channel simulation via mixtures of two generalized extreme channels."""

from qchansim.channels import Choi, Kraus, PauliChi, apply, as_choi, mix, validate
from qchansim.decomposer import DecomposeConfig, DecompositionResult, decompose, objective
from qchansim.extreme import Decomposition17, ExtremeParams, build_extreme, build_mixture
from qchansim.noise_presets import NoiseKind, make_noise, preset_decomposition

__all__ = [
    "Choi",
    "Kraus",
    "PauliChi",
    "apply",
    "as_choi",
    "mix",
    "validate",
    "DecomposeConfig",
    "DecompositionResult",
    "decompose",
    "objective",
    "Decomposition17",
    "ExtremeParams",
    "build_extreme",
    "build_mixture",
    "NoiseKind",
    "make_noise",
    "preset_decomposition",
]

__version__ = "0.1.0"
