"""Numerics for quantized complex quadratic Hamiltonian flows.

Exact operator norms, strict positivity certificates, Gaussian integral
kernels, and symbol composition for degree-2 Schrodinger evolutions, with
a brute-force grid oracle for cross-checks.
"""
from .errors import (
    BoundarySpectrumError,
    CompositionClassError,
    ConvergenceError,
    DegenerateKernelError,
    GridError,
    PositivityError,
    QuadflowError,
    SymbolConvergenceError,
)
from .config import TOLERANCES
from .symplectic import (
    CanonicalTransform,
    QuadraticForm,
    bar_inverse,
    canonical_log,
    flow,
    hamilton_matrix,
    inverse,
    is_canonical,
    quadratic_from_hamilton,
    sigma_transpose,
    standard_j,
    symplectic_form,
)
from .positivity import (
    PositivityReport,
    compactness_check,
    mehler_integrable,
    positivity_matrix,
    strict_positivity,
)
from .evolution import (
    CenterSample,
    CompositionResult,
    DecompositionData,
    EvolutionSpec,
    a_matrix,
    center_path,
    compose_evolutions,
    critical_time,
    decompose,
    eigenvalue_pairing,
    norm_quadratic,
    norm_shifted,
    real_log_exists,
)
from .symbols import (
    CrossingData,
    GaussianSymbol,
    PolynomialSymbol,
    ShiftOp,
    crossing,
    mehler_symbol,
    polynomial_pullback,
    shift_adjoint,
    shift_compose,
    shift_inverse,
    shift_left,
    shift_right,
    shift_symbol,
    symbol_transform,
    two_sided_shift,
    weyl_sharp,
)
from .kernels import (
    GaussianKernel,
    PolynomialKernel,
    apply_polynomial,
    evolution_to_kernel,
    kernel_adjoint,
    kernel_compose,
    kernel_left_shift,
    kernel_right_shift,
    kernel_shift_vector,
    kernel_to_evolution,
    kernel_transform,
    quantize,
    random_nondegenerate,
    real_shift_conjugate,
)
from .oracle import (
    GridSpec,
    auto_grid,
    discretize,
    grid_trace,
    kernel_norm,
    operator_norm,
)
from . import models

__version__ = "0.1.0"

__all__ = [
    "BoundarySpectrumError",
    "CompositionClassError",
    "ConvergenceError",
    "DegenerateKernelError",
    "GridError",
    "PositivityError",
    "QuadflowError",
    "SymbolConvergenceError",
    "TOLERANCES",
    "CanonicalTransform",
    "QuadraticForm",
    "bar_inverse",
    "canonical_log",
    "flow",
    "hamilton_matrix",
    "inverse",
    "is_canonical",
    "quadratic_from_hamilton",
    "sigma_transpose",
    "standard_j",
    "symplectic_form",
    "PositivityReport",
    "compactness_check",
    "mehler_integrable",
    "positivity_matrix",
    "strict_positivity",
    "CenterSample",
    "CompositionResult",
    "DecompositionData",
    "EvolutionSpec",
    "a_matrix",
    "center_path",
    "compose_evolutions",
    "critical_time",
    "decompose",
    "eigenvalue_pairing",
    "norm_quadratic",
    "norm_shifted",
    "real_log_exists",
    "CrossingData",
    "GaussianSymbol",
    "PolynomialSymbol",
    "ShiftOp",
    "crossing",
    "mehler_symbol",
    "polynomial_pullback",
    "shift_adjoint",
    "shift_compose",
    "shift_inverse",
    "shift_left",
    "shift_right",
    "shift_symbol",
    "symbol_transform",
    "two_sided_shift",
    "weyl_sharp",
    "GaussianKernel",
    "PolynomialKernel",
    "apply_polynomial",
    "evolution_to_kernel",
    "kernel_adjoint",
    "kernel_compose",
    "kernel_left_shift",
    "kernel_right_shift",
    "kernel_shift_vector",
    "kernel_to_evolution",
    "kernel_transform",
    "quantize",
    "random_nondegenerate",
    "real_shift_conjugate",
    "GridSpec",
    "auto_grid",
    "discretize",
    "grid_trace",
    "kernel_norm",
    "operator_norm",
    "models",
    "__version__",
]
