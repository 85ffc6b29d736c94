"""Quantization of the cotangent Lie algebra d = T*g: Yangian-type Hopf algebras,
twists, the level-0 vacuum vertex algebra and the spectral R-matrix."""

from .core import LieAlgebra, fixture, load_lie_algebra
from .classical import RMatrixInput, gamma
from .yangian import Quantization, build_matched_pair, quantize
from .rmat import RMatrices, full_R, r_reg, r_sing, R_s
from .repmod import SmoothModule, build_coregular, evaluate

__version__ = "0.1.0"

__all__ = [
    "LieAlgebra", "fixture", "load_lie_algebra", "RMatrixInput", "gamma", "Quantization",
    "build_matched_pair", "quantize", "RMatrices", "full_R", "r_reg", "r_sing", "R_s",
    "SmoothModule", "build_coregular", "evaluate",
]
