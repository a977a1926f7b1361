"""halflinegp: a nonstationary covariance kernel on the half-line with a
space-time kriging engine.

The temporal kernel lives on [0, inf), matching processes that evolve from
a distinct starting time; it is built from Laguerre-polynomial
eigenfunctions with geometric eigenvalues and evaluated through a closed
form in log space.  A Gaussian spatial factor turns it into a separable
space-time covariance for kriging gridded observations.
"""

__version__ = "0.1.0"

from ._backend import backend_name
from .halfline import (HalfLineParams, MercerResult, MercerTruncation,
                       eigenfunction, eigenvalue, kernel_limit_infinity,
                       kernel_limit_zero, kernel_log_matrix, kernel_log_value,
                       kernel_matrix, kernel_mercer, kernel_value, max_over_t,
                       normalization, orthonormality_residuals,
                       eigenrelation_residual, weight)
from .specfun import (LaguerreOrder, bessel_i_scaled, laguerre,
                      laguerre_sequence, log_bessel_i, log_gamma)
from .spacetime import (GaussianParams, ProductKernelParams, SpaceTimePoint,
                        gaussian_kernel, product_gram, product_kernel)
from .gp import (Dataset, FactorizationError, KrigingModel, fit, predict_mean,
                 predict_variance, rmse)
from .data import (CsvFormatError, GridError, GridSpec, SplitSpec, load_csv,
                   split_by_day, synthesize, write_csv)

__all__ = [
    "__version__",
    "backend_name",
    # specfun
    "LaguerreOrder", "log_gamma", "bessel_i_scaled", "log_bessel_i",
    "laguerre", "laguerre_sequence",
    # halfline
    "HalfLineParams", "MercerTruncation", "MercerResult", "eigenvalue",
    "normalization", "eigenfunction", "weight", "kernel_mercer",
    "kernel_value", "kernel_log_value", "kernel_matrix", "kernel_log_matrix",
    "kernel_limit_zero", "kernel_limit_infinity", "max_over_t",
    "orthonormality_residuals", "eigenrelation_residual",
    # spacetime
    "SpaceTimePoint", "GaussianParams", "ProductKernelParams",
    "gaussian_kernel", "product_kernel", "product_gram",
    # gp
    "Dataset", "KrigingModel", "FactorizationError", "fit", "predict_mean",
    "predict_variance", "rmse",
    # data
    "GridSpec", "SplitSpec", "CsvFormatError", "GridError", "load_csv",
    "write_csv", "split_by_day", "synthesize",
]
