"""Scattering matrices and spectral shift functions from matrix Weyl functions.

The package computes, for pairs of selfadjoint extensions of a symmetric
operator with finite deficiency index, the scattering matrix

    S_Theta(lambda) = I + 2i sqrt(Im M) (Theta - M)^{-1} sqrt(Im M)

on the fiber ran(Im M(lambda + i0)) and the spectral shift function

    xi_Theta(lambda) = (1/pi) Im tr log(M(lambda + i0) - Theta),

working entirely at the level of the matrix Nevanlinna function M of a
boundary triplet.  Four concrete model families are shipped (free half line,
matrix Schroedinger via Jost solutions, one-dimensional Dirac, point
interactions) together with a verification harness for the structural
identities: unitarity, Birman-Krein, gap integrality, the trace-formula
identity and high-energy asymptotics.
"""

from .cxlinalg import (
    HermitianEigen,
    QuadratureConfig,
    det_tr_log_consistency,
    herm_eig,
    matlog_eig,
    matlog_integral,
    psd_sqrt,
)
from .errors import (
    BandEdge,
    BoundaryLimitFailed,
    ConfigError,
    EvaluationDomain,
    ImZero,
    LowerHalfSpectrum,
    NonInvertible,
    NotHermitian,
    NotOperator,
    NotPSD,
    QuadratureError,
    SingularArgument,
    SingularJost,
    SingularPoint,
    SpectralPoint,
    StepFailure,
    ThresholdPoint,
    TruncationWarning,
    WeylScatterError,
)
from .models import (
    ConstantWell,
    DiracModel,
    ExponentialDecay,
    FreeHalfLineModel,
    MatrixSchrodingerModel,
    PointInteractionModel,
    TabulatedPotential,
    ZeroPotential,
    asymptotic_check,
    dirac_m,
    free_m,
    jost_solution,
    point_interaction_m,
    schrodinger_m,
)
from .relations import BoundaryParameter, check_selfadjoint, relation_condition, relation_resolvent
from .scattering import (
    ScatteringPoint,
    dirac_theta_recovery,
    im_boundary,
    range_projection,
    smatrix,
    smatrix_factorized,
    smatrix_scalar_type,
)
from .ssf import (
    SsfPoint,
    birman_krein_residual,
    classify_regime,
    dirac_thresholds,
    free_thresholds,
    gap_count,
    ssf_point,
    trace_formula_check,
    xi,
    xi_closed_form_dirac,
    xi_closed_form_free,
)
from .weyl import WeylFunctionModel, branch_sqrt, validate_nevanlinna

__version__ = "0.1.0"
