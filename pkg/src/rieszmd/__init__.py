"""Fractional derivatives of rational order on the whole real line.

The line is split into a central interval and two neighbourhoods of infinity,
each treated with Chebyshev collocation; the Riesz-type integrals defining
``D^alpha`` are evaluated with substitutions that keep every integrand smooth.
"""

from rieszmd.errors import (
    ConvergenceError,
    DimensionError,
    InvalidGridError,
    InvalidOrderError,
    InvalidResolutionError,
    NumericalDomainError,
    OutOfRangeError,
    PartitionError,
    RieszError,
    SampledFunctionError,
)
from rieszmd.fourier import TorusGrid, compare_methods, dft_soliton, fft_fractional_derivative, table1_sweep
from rieszmd.functions import GAUSS, LORENTZ, powerlaw
from rieszmd.riesz import FractionalDerivative, assemble_operator, fractional_derivative, riesz_minus, riesz_plus
from rieszmd.soliton import (
    ConvergenceRecord,
    SolitonProblem,
    benjamin_ono_initial,
    continuation_seed,
    gmres,
    hamiltonian,
    jacobian_apply,
    mass,
    newton_solve,
    rescale_soliton,
    residual,
    resolve_on,
    schedule_to,
    secant_seed,
    trace_alpha,
    transfer,
    transfer_callable,
    walk_to_partition,
)
from rieszmd.spectral import (
    ChebCoefficients,
    SpectralWorkspace,
    barycentric_eval,
    chebyshev_coefficients,
    differentiate,
    integrate,
    make_workspace,
)
from rieszmd.tridomain import Domain, DomainPartition, RationalOrder, TriDomainFunction, TriDomainGrid

__all__ = [
    "ChebCoefficients",
    "ConvergenceError",
    "ConvergenceRecord",
    "DimensionError",
    "Domain",
    "DomainPartition",
    "FractionalDerivative",
    "GAUSS",
    "InvalidGridError",
    "InvalidOrderError",
    "InvalidResolutionError",
    "LORENTZ",
    "NumericalDomainError",
    "OutOfRangeError",
    "PartitionError",
    "RationalOrder",
    "RieszError",
    "SampledFunctionError",
    "SolitonProblem",
    "SpectralWorkspace",
    "TorusGrid",
    "TriDomainFunction",
    "TriDomainGrid",
    "assemble_operator",
    "barycentric_eval",
    "benjamin_ono_initial",
    "chebyshev_coefficients",
    "compare_methods",
    "continuation_seed",
    "dft_soliton",
    "differentiate",
    "fft_fractional_derivative",
    "fractional_derivative",
    "gmres",
    "hamiltonian",
    "integrate",
    "jacobian_apply",
    "make_workspace",
    "mass",
    "newton_solve",
    "powerlaw",
    "rescale_soliton",
    "residual",
    "resolve_on",
    "riesz_minus",
    "riesz_plus",
    "schedule_to",
    "secant_seed",
    "table1_sweep",
    "trace_alpha",
    "transfer",
    "transfer_callable",
    "walk_to_partition",
]
