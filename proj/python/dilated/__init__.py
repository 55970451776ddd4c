"""Quantale-valued fixed-point machinery with probabilistic central limits.

The heavy lifting lives in the compiled extension ``dilated._core``; this
package re-exports the main operations.
"""

from ._core import (
    CltSystem,
    DilatedError,
    DualGrid,
    GaussianMeasure,
    Kind,
    LatticeMeasure,
    PsdMatrix,
    QuantaleInstance,
    abs_moment,
    bernoulli,
    block_diag,
    bures_wasserstein,
    central_limit,
    char_fn,
    check_laws,
    convolve,
    dilate,
    dirac,
    expectation,
    fourier_distance,
    fourier_l_distance,
    observable_clt,
    product,
    psd_dilate,
    psd_pushforward,
    pushforward_linear,
    rademacher,
    residual,
    sqrt_psd,
    tensor,
    theoretical_ratio,
    theta,
    uniform_lattice,
    variance_matrix,
)

__all__ = [
    "CltSystem",
    "DilatedError",
    "DualGrid",
    "GaussianMeasure",
    "Kind",
    "LatticeMeasure",
    "PsdMatrix",
    "QuantaleInstance",
    "abs_moment",
    "bernoulli",
    "block_diag",
    "bures_wasserstein",
    "central_limit",
    "char_fn",
    "check_laws",
    "convolve",
    "dilate",
    "dirac",
    "expectation",
    "fourier_distance",
    "fourier_l_distance",
    "observable_clt",
    "product",
    "psd_dilate",
    "psd_pushforward",
    "pushforward_linear",
    "rademacher",
    "residual",
    "sqrt_psd",
    "tensor",
    "theoretical_ratio",
    "theta",
    "uniform_lattice",
    "variance_matrix",
]

__version__ = "0.1.0"
