"""Scattering matrices on the fiber spaces ran(Im M(lambda + i0)).

The full-space form

    S_full = I + 2i sqrt(Im M) (Theta - M)^{-1} sqrt(Im M)

acts as the identity on ker(Im M); restricting to an orthonormal basis of
ran(Im M) gives the genuine (unitary) scattering matrix ``S_reduced`` of rank
r = dim ran(Im M).  In spectral gaps r = 0 and det S is taken to be 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cxlinalg import antihermitian_part, herm_eig, psd_sqrt
from .errors import ImZero, NonInvertible
from .relations import BoundaryParameter, relation_condition, relation_resolvent

__all__ = [
    "ScatteringPoint",
    "im_boundary",
    "range_projection",
    "smatrix",
    "smatrix_scalar_type",
    "smatrix_factorized",
    "dirac_theta_recovery",
]

#: relative eigenvalue threshold deciding dim ran(Im M)
DEFAULT_RANK_TOL = 1e-10
#: eigenvalues of Im M in this relative band are reported as rank-ambiguous
RANK_AMBIGUOUS_BAND = (1e-14, 1e-8)


@dataclass(frozen=True)
class ScatteringPoint:
    """S_Theta(lambda) together with rank and conditioning diagnostics."""

    lam: float
    rank: int
    S_full: np.ndarray
    S_reduced: np.ndarray
    det_S: complex
    cond: float
    rank_ambiguous: bool = field(default=False)


def im_boundary(M_val) -> np.ndarray:
    """(M - M*) / 2i, exactly Hermitian by construction."""
    return antihermitian_part(M_val)


def range_projection(ImM, rank_tol: float = DEFAULT_RANK_TOL):
    """Rank and orthonormal basis of ran(Im M).

    Returns ``(r, V, ambiguous)`` where V is an n x r isometry (eigenvectors
    of the eigenvalues above ``rank_tol * max(1, |Im M|)``; deterministic
    ascending order) and ``ambiguous`` flags eigenvalues falling inside the
    undecidable band around the threshold.
    """
    eig = herm_eig(ImM, tol=1e-10)
    scale = max(1.0, np.linalg.norm(np.asarray(ImM), 2))
    w = eig.eigenvalues
    keep = w > rank_tol * scale
    lo, hi = RANK_AMBIGUOUS_BAND
    ambiguous = bool(np.any((w > lo * scale) & (w < hi * scale)))
    V = eig.eigenvectors[:, keep]
    return int(keep.sum()), V, ambiguous


def smatrix(
    M_val,
    theta: BoundaryParameter,
    rank_tol: float = DEFAULT_RANK_TOL,
    psd_tol: float = 1e-12,
    lam: float = float("nan"),
) -> ScatteringPoint:
    """Scattering matrix from a boundary value M(lambda + i0) and parameter Theta."""
    M = np.atleast_2d(np.asarray(M_val, dtype=complex))
    n = M.shape[0]
    W = im_boundary(M)
    R = psd_sqrt(W, tol=psd_tol)
    resolvent = relation_resolvent(theta, M)
    cond = relation_condition(theta, M)
    S_full = np.eye(n) + 2j * (R @ resolvent @ R)
    r, V, ambiguous = range_projection(W, rank_tol)
    S_reduced = V.conj().T @ S_full @ V
    det_S = complex(np.linalg.det(S_reduced)) if r > 0 else 1.0 + 0.0j
    return ScatteringPoint(
        lam=float(lam) if np.isreal(lam) else float("nan"),
        rank=r,
        S_full=S_full,
        S_reduced=S_reduced,
        det_S=det_S,
        cond=cond,
        rank_ambiguous=ambiguous,
    )


def smatrix_scalar_type(m_val: complex, theta: BoundaryParameter, n: int) -> np.ndarray:
    """(Theta - conj(m) I)(Theta - m I)^{-1} for a scalar-type Weyl function m*I.

    Equals the full-space scattering matrix when Im m != 0 (then the fiber is
    all of C^n); raises :class:`ImZero` otherwise.
    """
    m = complex(m_val)
    if m.imag == 0:
        raise ImZero("Im m = 0: fiber space is trivial")
    if theta.kind != "matrix":
        raise NotImplementedError("scalar-type shortcut requires a matrix parameter")
    T = theta.matrix
    eye = np.eye(n)
    return (T - m.conjugate() * eye) @ np.linalg.inv(T - m * eye)


def smatrix_factorized(M_plus, M_minus, theta: BoundaryParameter) -> np.ndarray:
    """(Theta - M(lambda - i0)) (Theta - M(lambda + i0))^{-1}.

    ``M_minus`` is the adjoint of the boundary value from above.  When Im M
    is invertible this matrix is similar to S_full via conjugation by
    (Im M)^{1/2}, so the two share their spectrum.
    """
    if theta.kind != "matrix":
        raise NotImplementedError("factorized form requires a matrix parameter")
    Mp = np.atleast_2d(np.asarray(M_plus, dtype=complex))
    Mm = np.atleast_2d(np.asarray(M_minus, dtype=complex))
    T = theta.matrix
    return (T - Mm) @ np.linalg.inv(T - Mp)


def dirac_theta_recovery(S_inf) -> np.ndarray:
    """Boundary parameter from the high-energy limit of the scattering matrix.

    Inverts S(inf) = I + 2i (Theta - i)^{-1} as Theta = i (S+I)(S-I)^{-1}.
    """
    S = np.atleast_2d(np.asarray(S_inf, dtype=complex))
    n = S.shape[0]
    D = S - np.eye(n)
    sv = np.linalg.svd(D, compute_uv=False)
    if sv.min() < 1e-10:
        raise NonInvertible("S(inf) - I is numerically singular")
    return 1j * (S + np.eye(n)) @ np.linalg.inv(D)
