"""Numerical calculus for the Jacobi-Cherednik operator family.

Eigenfunctions, the associated integral transform and its inversion, the
heat kernel and semigroup, the reproducing-kernel structure of the
semigroup image, the Green operator for the modified Poisson equation,
and the Markov process driven by the kernel.
"""

from .params import JacobiParams
from .quadrature import (
    ExponentialDecay,
    GaussianDecay,
    IntegralResult,
    QuadratureConfig,
    SupportRadius,
    integrate_finite,
    integrate_line,
)
from .specfun import (
    eigenfunction_G,
    gamma_complex,
    log_deriv_A,
    phi,
    plancherel_density,
    weight_A,
)
from .functions import SampledFunction, SchwartzDecay, SpectralFunction, from_callback
from .operators import EvaluableFunction, apply_T, apply_T2, check_condition_c2rho, laplacian
from .transform import convolve, forward, inverse, plancherel_check, translate

__all__ = [
    "JacobiParams",
    "QuadratureConfig",
    "IntegralResult",
    "GaussianDecay",
    "ExponentialDecay",
    "SupportRadius",
    "SchwartzDecay",
    "integrate_finite",
    "integrate_line",
    "gamma_complex",
    "weight_A",
    "log_deriv_A",
    "phi",
    "eigenfunction_G",
    "plancherel_density",
    "SampledFunction",
    "SpectralFunction",
    "from_callback",
    "EvaluableFunction",
    "apply_T",
    "apply_T2",
    "laplacian",
    "check_condition_c2rho",
    "forward",
    "inverse",
    "plancherel_check",
    "translate",
    "convolve",
]

__version__ = "0.1.0"
