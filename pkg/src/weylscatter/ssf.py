"""Spectral shift functions and the Birman-Krein check.

The spectral shift of the pair (extension labelled by a bounded Hermitian
Theta, reference extension) is fixed as

    xi(lambda) = (1/pi) * Im tr log( M(lambda + i0) - Theta ),

with the integral matrix logarithm of :mod:`weylscatter.cxlinalg`, whose
branch pins 0 <= xi <= n.  On spectral gaps (Im M = 0) xi is the number of
negative eigenvalues of the Hermitian matrix M - Theta; on the absolutely
continuous spectrum it is tied to the scattering determinant by
det S = exp(-2 pi i xi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cxlinalg import QuadratureConfig, antihermitian_part, herm_eig, hermitian_part, matlog_integral
from .errors import (
    BoundaryLimitFailed,
    NotOperator,
    SingularArgument,
    SingularPoint,
    SpectralPoint,
    ThresholdPoint,
)
from .relations import MATRIX, BoundaryParameter
from .scattering import DEFAULT_RANK_TOL, ScatteringPoint, smatrix

__all__ = [
    "SsfPoint",
    "GAP",
    "AC",
    "SINGULAR",
    "classify_regime",
    "xi",
    "birman_krein_residual",
    "xi_closed_form_free",
    "xi_closed_form_dirac",
    "dirac_thresholds",
    "free_thresholds",
    "gap_count",
    "trace_formula_check",
    "ssf_point",
]

GAP = "gap"
AC = "ac"
SINGULAR = "singular"

#: relative size of Im M below which a boundary value counts as a gap point
GAP_IM_TOL = 1e-10


@dataclass(frozen=True)
class SsfPoint:
    lam: float
    xi: float
    bk_residual: float
    regime: str
    scattering: ScatteringPoint | None = field(default=None, repr=False)


def _theta_matrix(theta) -> np.ndarray:
    """Hermitian matrix of a boundary parameter; NotOperator for true relations."""
    if isinstance(theta, BoundaryParameter):
        if theta.kind == MATRIX:
            return theta.matrix
        if not theta.is_operator():
            raise NotOperator("spectral shift is defined for bounded operator parameters only")
        return theta.to_matrix()
    T = np.atleast_2d(np.asarray(theta, dtype=complex))
    if np.linalg.norm(T - T.conj().T, 2) > 1e-12 * max(1.0, np.linalg.norm(T, 2)):
        raise ValueError("theta must be Hermitian")
    return T


def classify_regime(M_val) -> str:
    M = np.atleast_2d(np.asarray(M_val, dtype=complex))
    im_norm = np.linalg.norm(antihermitian_part(M), 2)
    return GAP if im_norm <= GAP_IM_TOL * max(1.0, np.linalg.norm(M, 2)) else AC


def xi(M_val_boundary, theta, quad: QuadratureConfig | None = None) -> float:
    """(1/pi) Im tr log(M(lambda+i0) - Theta) for a bounded Hermitian Theta."""
    T = _theta_matrix(theta)
    M = np.atleast_2d(np.asarray(M_val_boundary, dtype=complex))
    L = matlog_integral(M - T, quad=quad)
    return float(np.trace(L).imag / math.pi)


def birman_krein_residual(sp, xi_val: float) -> float:
    """|det S - exp(-2 pi i xi)| at a common lambda.

    With the det = 1 convention at rank 0, the residual there measures the
    distance of xi from the nearest integer.
    """
    det_S = sp.det_S if isinstance(sp, ScatteringPoint) else complex(sp)
    return float(abs(det_S - np.exp(-2j * math.pi * xi_val)))


# ---------------------------------------------------------------------------
# closed forms


def free_thresholds(theta_eigs) -> tuple[float, ...]:
    """Excluded points of the free-model closed form: 0 and -theta^2 for theta < 0."""
    pts = [0.0]
    pts += [-float(t) ** 2 for t in np.atleast_1d(theta_eigs) if t < 0]
    return tuple(pts)


def _sf_free_scalar(theta: float, lam: float) -> float:
    if lam < 0:
        if theta > 0 or theta == 0:
            return 1.0
        return 1.0 if lam < -(theta**2) else 0.0
    # lam > 0: boundary value i*sqrt(lam) has positive imaginary part
    root = math.sqrt(lam)
    if theta == 0:
        return 0.5
    if theta > 0:
        return 1.0 - math.atan(root / theta) / math.pi
    return -math.atan(root / theta) / math.pi


def xi_closed_form_free(theta_eigs, lam: float, tol: float = 1e-12) -> float:
    """Closed-form spectral shift of the free model, summed over channels.

    ``theta_eigs`` are the eigenvalues of the Hermitian parameter.  Excluded
    points (0 and the bound-state energies -theta^2 for theta < 0) raise
    :class:`ThresholdPoint`.
    """
    lam = float(lam)
    eigs = [float(t) for t in np.atleast_1d(theta_eigs)]
    for p in free_thresholds(eigs):
        if abs(lam - p) <= tol:
            raise ThresholdPoint(f"lambda = {lam} is a threshold of the closed form")
    return sum(_sf_free_scalar(t, lam) for t in eigs)


def dirac_thresholds(a: float, theta1: float, theta2: float) -> tuple[float, ...]:
    """Excluded points of the Dirac closed form: band edges and gap crossings.

    The first channel has a gap bound state at a(t1^2-1)/(t1^2+1) when
    theta1 > 0; the second at a(1-t2^2)/(1+t2^2) when theta2 < 0.
    """
    pts = [-a, a]
    if theta1 > 0:
        pts.append(a * (theta1**2 - 1.0) / (theta1**2 + 1.0))
    if theta2 < 0:
        pts.append(a * (1.0 - theta2**2) / (1.0 + theta2**2))
    return tuple(pts)


def _eta_band(t: float, theta: float) -> float:
    """Per-channel contribution on the bands, where the boundary value is i*t."""
    if theta > 0:
        return 1.0 - math.atan(t / theta) / math.pi
    if theta == 0:
        return 0.5
    return -math.atan(t / theta) / math.pi


def xi_closed_form_dirac(a: float, theta1: float, theta2: float, lam: float, tol: float = 1e-12) -> float:
    """Closed-form spectral shift of the Dirac model with diagonal parameter.

    On the bands |lambda| > a each channel contributes the arctan expression
    in its own ratio t_i; inside the gap the channels contribute indicator
    functions of their bound-state intervals: the first channel binds for
    theta1 > 0 below a(theta1^2-1)/(theta1^2+1), the second for theta2 < 0
    below a(1-theta2^2)/(1+theta2^2), and the second channel contributes 1
    throughout the gap when theta2 >= 0 (its boundary value is negative
    there).  This is the case-split of (1/pi) arg(m_i(lambda+i0) - theta_i).
    """
    lam = float(lam)
    for p in dirac_thresholds(a, theta1, theta2):
        if abs(lam - p) <= tol:
            raise ThresholdPoint(f"lambda = {lam} is a threshold of the closed form")
    t1 = math.sqrt(abs((lam + a) / (lam - a)))
    t2 = 1.0 / t1
    if abs(lam) > a:
        return _eta_band(t1, theta1) + _eta_band(t2, theta2)
    # spectral gap: first-channel value is +t1, second-channel value is -t2
    eta1 = 1.0 if (theta1 > 0 and lam < a * (theta1**2 - 1.0) / (theta1**2 + 1.0)) else 0.0
    if theta2 >= 0:
        eta2 = 1.0
    else:
        eta2 = 1.0 if lam < a * (1.0 - theta2**2) / (1.0 + theta2**2) else 0.0
    return eta1 + eta2


# ---------------------------------------------------------------------------
# gap counting and the trace-formula identity


def gap_count(M_val_boundary, theta) -> int:
    """Number of negative eigenvalues of the Hermitian matrix M - Theta.

    Valid in the gap regime (Im M = 0), where each negative eigenvalue
    contributes a full unit to xi.
    """
    T = _theta_matrix(theta)
    M = np.atleast_2d(np.asarray(M_val_boundary, dtype=complex))
    if classify_regime(M) != GAP:
        raise SingularArgument("gap_count requires Im M = 0 (gap regime)")
    w = herm_eig(hermitian_part(M) - T, tol=1e-10).eigenvalues
    scale = max(1.0, float(np.abs(w).max()))
    if np.any(np.abs(w) <= 1e-12 * scale):
        raise SingularArgument("M - Theta numerically singular at a gap point")
    return int(np.sum(w < 0))


def trace_formula_check(model, theta, lam, h: float | None = None, quad: QuadratureConfig | None = None) -> float:
    """Residual of d/dlambda tr log(M - Theta) = tr((M - Theta)^{-1} M').

    Both sides use the same central-difference step ``h`` along the real
    direction.  The default step 1e-3 * max(1, |lambda|) balances the O(h^2)
    truncation error against quadrature noise amplified by 1/h.
    """
    z = complex(lam)
    if h is None:
        h = 1e-3 * max(1.0, abs(z))
    if z.imag <= 2 * h:
        raise ValueError(f"trace_formula_check requires Im(lambda) > 2h = {2 * h:.3e}")
    T = _theta_matrix(theta)
    quad = quad or QuadratureConfig()
    quad_fine = QuadratureConfig(
        tol=min(quad.tol, 1e-11), cond_cap=quad.cond_cap, im_tol=quad.im_tol, max_depth=quad.max_depth
    )

    def phi(w: complex) -> complex:
        return complex(np.trace(matlog_integral(model.eval_upper(w) - T, quad=quad_fine)))

    lhs = (phi(z + h) - phi(z - h)) / (2.0 * h)
    dM = model.derivative(z, h=h)
    M = model.eval_upper(z)
    rhs = complex(np.trace(np.linalg.solve(M - T, dM)))
    return float(abs(lhs - rhs))


# ---------------------------------------------------------------------------
# per-point driver


def ssf_point(
    model,
    theta,
    lam: float,
    quad: QuadratureConfig | None = None,
    rank_tol: float = DEFAULT_RANK_TOL,
    psd_tol: float = 1e-12,
) -> SsfPoint:
    """xi, Birman-Krein residual and regime at one real lambda.

    Points where the boundary value fails (declared singular points, failed
    extrapolation, embedded spectral points) are reported with regime
    ``singular`` and NaN data rather than raising.
    """
    try:
        M = model.eval_boundary(lam)
    except (SingularPoint, BoundaryLimitFailed):
        return SsfPoint(lam=lam, xi=float("nan"), bk_residual=float("nan"), regime=SINGULAR)
    regime = classify_regime(M)
    if regime == GAP:
        # project out extrapolation dust: the gap boundary value is Hermitian
        M = hermitian_part(M)
    try:
        sp = smatrix(M, theta, rank_tol=rank_tol, psd_tol=psd_tol, lam=lam)
        xi_val = xi(M, theta, quad=quad)
    except (SpectralPoint, SingularArgument):
        return SsfPoint(lam=lam, xi=float("nan"), bk_residual=float("nan"), regime=SINGULAR)
    return SsfPoint(
        lam=lam,
        xi=xi_val,
        bk_residual=birman_krein_residual(sp, xi_val),
        regime=regime,
        scattering=sp,
    )
