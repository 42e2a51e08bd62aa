"""Finite-dimensional Gabor analysis of Weyl pseudodifferential operators on Z_N."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    FrameError,
    GaborLabError,
    ParityError,
    PreconditionError,
)
from .gabor import (  # noqa: E402
    Lattice,
    Window,
    analyze,
    build_system,
    periodized_gaussian,
    synthesize,
)
from .gabor_matrix import (  # noqa: E402
    GaborMatrix,
    cv_norm,
    decay_profile,
    sjostrand_norm,
)
from .modspace import MixedNormSpec, Weight, mixed_norm, mod_norm, moderate  # noqa: E402
from .quantize import Calculus, dequantize, quantize, twisted_product, weyl_quantize  # noqa: E402
from .tf_core import cross_wigner, stft, tf_shift  # noqa: E402
from .wiener_lab import pseudoinverse_riesz, pseudoinverse_svd, wiener_experiment  # noqa: E402

__all__ = [
    "Calculus", "ConfigError", "FrameError", "GaborLabError", "GaborMatrix", "Lattice", "MixedNormSpec",
    "ParityError", "PreconditionError", "Weight", "Window", "analyze", "build_system", "cross_wigner",
    "cv_norm", "decay_profile", "dequantize", "mixed_norm", "mod_norm", "moderate",
    "periodized_gaussian", "pseudoinverse_riesz", "pseudoinverse_svd", "quantize", "sjostrand_norm",
    "stft", "synthesize", "tf_shift", "twisted_product", "weyl_quantize", "wiener_experiment",
]
