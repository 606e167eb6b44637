"""Quaternion Hermitian Toeplitz systems: fast products, Strang circulant
preconditioning, PCG, and the signal models that produce such systems."""
from .adjoint import adjoint_matrix, adjoint_vector, combine, inverse_adjoint_vector, split
from .circulant import BlockDiagFactor, Circulant, SingularBlockError, block_diagonalize, strang, strang_column
from .pcg import (
    BreakdownError,
    MaxIterationsError,
    NonRealStepError,
    PCGError,
    SolveConfig,
    SolveReport,
    pcg_solve,
    solve_toeplitz,
)
from .quat import Quaternion, inner, qconj, qmul, vnorm
from .signal import ProcessSpec, estimate_correlation, prediction_system, synthesize
from .spectra import clustering_report, dense_spectrum, szego_moment_check
from .symbols import SymbolModel, ar1_model, constant_model, ma1_model
from .toeplitz import HermitianToeplitz

__version__ = "0.1.0"
