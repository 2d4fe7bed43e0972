"""Dense complex linear algebra at small fixed dimension.

Everything here operates on plain ``numpy`` arrays of shape ``(n, n)`` with
complex entries.  The centrepiece is :func:`matlog_integral`, a matrix
logarithm defined through a resolvent integral along the positive imaginary
axis,

    log(T) = -i * integral_0^inf ( (T + it)^{-1} - (1 + it)^{-1} I ) dt,

valid whenever the imaginary part of ``T`` is positive semidefinite and ``T``
is invertible.  On that domain the branch satisfies 0 <= Im(log T) <= pi as a
quadratic form, which is the property the spectral shift computation relies
on.  The integral is evaluated by adaptive Gauss-Legendre quadrature after
the substitution t = s / (1 - s).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    LowerHalfSpectrum,
    NotHermitian,
    NotPSD,
    QuadratureError,
    SingularArgument,
)

__all__ = [
    "QuadratureConfig",
    "HermitianEigen",
    "herm_eig",
    "psd_sqrt",
    "matlog_integral",
    "matlog_eig",
    "det_tr_log_consistency",
    "hermitian_part",
    "antihermitian_part",
    "is_hermitian",
    "is_psd",
    "is_unitary",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for the matrix-logarithm quadrature.

    ``tol``       absolute tolerance of the half-line integral
    ``cond_cap``  condition-number cap beyond which the argument counts as singular
    ``im_tol``    relative tolerance when testing Im(T) >= 0
    ``max_depth`` bisection depth limit of the adaptive rule
    """

    tol: float = 1e-9
    cond_cap: float = 1e12
    im_tol: float = 1e-10
    max_depth: int = 48


@dataclass(frozen=True)
class HermitianEigen:
    """Eigendecomposition of a Hermitian matrix with a fixed ordering.

    ``eigenvalues`` are ascending; ``eigenvectors`` holds orthonormal columns
    whose first significant component is made real positive, so the
    decomposition is deterministic up to degeneracies.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square(T) -> np.ndarray:
    A = np.asarray(T, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A


def hermitian_part(T) -> np.ndarray:
    A = _as_square(T)
    return 0.5 * (A + A.conj().T)


def antihermitian_part(T) -> np.ndarray:
    """(T - T*) / 2i, Hermitian by construction."""
    A = _as_square(T)
    return (A - A.conj().T) / 2j


def is_hermitian(T, tol: float = 1e-12) -> bool:
    A = _as_square(T)
    scale = max(1.0, np.linalg.norm(A, 2))
    return np.linalg.norm(A - A.conj().T, 2) <= tol * scale


def is_psd(T, tol: float = 1e-12) -> bool:
    A = _as_square(T)
    if not is_hermitian(A, tol):
        return False
    w = np.linalg.eigvalsh(hermitian_part(A))
    return w.min() >= -tol * max(1.0, np.linalg.norm(A, 2))


def is_unitary(T, tol: float = 1e-12) -> bool:
    A = _as_square(T)
    return np.linalg.norm(A.conj().T @ A - np.eye(A.shape[0]), 2) <= tol


def _fix_phases(V: np.ndarray) -> np.ndarray:
    """Rotate each column so its first significant entry is real positive."""
    W = V.copy()
    for k in range(W.shape[1]):
        col = W[:, k]
        mags = np.abs(col)
        idx = np.argmax(mags > 1e-12 * max(mags.max(), 1e-300))
        pivot = col[idx]
        if abs(pivot) > 0:
            W[:, k] = col * (abs(pivot) / pivot)
    return W


def herm_eig(T, tol: float = 1e-12) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix with deterministic ordering.

    Raises :class:`NotHermitian` if ``|T - T*| > tol * max(1, |T|)``.
    """
    A = _as_square(T)
    scale = max(1.0, np.linalg.norm(A, 2))
    if np.linalg.norm(A - A.conj().T, 2) > tol * scale:
        raise NotHermitian(f"matrix deviates from Hermitian by more than {tol}*max(1,|T|)")
    w, V = np.linalg.eigh(hermitian_part(A))
    return HermitianEigen(eigenvalues=w, eigenvectors=_fix_phases(V))


def psd_sqrt(T, tol: float = 1e-12) -> np.ndarray:
    """Hermitian PSD square root.

    Eigenvalues in ``[-tol * max(1, |T|), 0)`` are clamped to zero; anything
    more negative raises :class:`NotPSD`.
    """
    eig = herm_eig(T, tol=max(tol, 1e-12))
    scale = max(1.0, np.linalg.norm(np.asarray(T), 2))
    w = eig.eigenvalues
    if w.min() < -tol * scale:
        raise NotPSD(f"minimal eigenvalue {w.min():.3e} below -{tol:.1e}*max(1,|T|)")
    w = np.clip(w, 0.0, None)
    V = eig.eigenvectors
    R = (V * np.sqrt(w)) @ V.conj().T
    return hermitian_part(R)


# 15-point Gauss-Legendre rule on [-1, 1]; panels are bisected adaptively.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)


def _gl_panel(f, a: float, b: float) -> np.ndarray:
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    acc = None
    for x, w in zip(_GL_NODES, _GL_WEIGHTS):
        val = w * f(c + h * x)
        acc = val if acc is None else acc + val
    return h * acc


def _adaptive_gl(f, a: float, b: float, tol: float, max_depth: int) -> np.ndarray:
    """Adaptive Gauss-Legendre integration of a matrix-valued function.

    Accepts a panel when the difference between the one-panel and bisected
    estimates is below ``tol`` scaled by the panel width, so the accumulated
    error stays below ``tol * (b - a)``.
    """
    total = None
    stack = [(a, b, _gl_panel(f, a, b), 0)]
    while stack:
        a0, b0, coarse, depth = stack.pop()
        mid = 0.5 * (a0 + b0)
        left = _gl_panel(f, a0, mid)
        right = _gl_panel(f, mid, b0)
        fine = left + right
        err = np.max(np.abs(fine - coarse))
        if err <= tol * (b0 - a0) or depth >= max_depth:
            if depth >= max_depth and err > 10 * tol * (b0 - a0):
                raise QuadratureError(
                    f"panel [{a0:.3e}, {b0:.3e}] not converged at depth {depth} (err={err:.3e})"
                )
            total = fine if total is None else total + fine
        else:
            stack.append((a0, mid, left, depth + 1))
            stack.append((mid, b0, right, depth + 1))
    return total


def matlog_integral(T, quad: QuadratureConfig | None = None) -> np.ndarray:
    """Matrix logarithm by the half-line resolvent integral.

    Requires Im(T) >= 0 (within ``quad.im_tol``) and ``T`` invertible with
    condition number below ``quad.cond_cap``.  The result L satisfies
    exp(tr L) = det T and 0 <= Im L <= pi*I up to the quadrature tolerance.
    """
    quad = quad or QuadratureConfig()
    A = _as_square(T)
    n = A.shape[0]
    scale = max(1.0, np.linalg.norm(A, 2))

    im_min = np.linalg.eigvalsh(antihermitian_part(A)).min()
    if im_min < -quad.im_tol * scale:
        raise LowerHalfSpectrum(
            f"Im(T) has eigenvalue {im_min:.3e}; lower-half spectrum is outside the branch domain"
        )
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > quad.cond_cap:
        raise SingularArgument(f"argument near-singular (cond={cond:.3e})")

    eye = np.eye(n)
    C = eye - A

    def integrand(s: float) -> np.ndarray:
        # (1+it)^{-1} (I-T) (T+it)^{-1} * dt/ds  with  t = s/(1-s).
        # The product form avoids the cancellation of subtracting two
        # resolvents that both behave like -i/t for large t.
        t = s / (1.0 - s)
        X = np.linalg.solve(A + 1j * t * eye, C)
        return X / ((1.0 - s) ** 2 * (1.0 + 1j * t))

    F = _adaptive_gl(integrand, 0.0, 1.0, quad.tol, quad.max_depth)
    return -1j * F


def matlog_eig(T, im_clamp: float = 1e-12) -> np.ndarray:
    """Cross-check logarithm through an eigendecomposition.

    Only meaningful for diagonalizable (in practice: normal) arguments whose
    spectrum lies in the closed upper half plane away from 0.  Eigenvalues
    with slightly negative imaginary part (roundoff) are clamped onto the
    real axis from above so the branch Im(log) in [0, pi] is kept.
    """
    A = _as_square(T)
    w, V = np.linalg.eig(A)
    w = np.where((w.imag < 0) & (w.imag > -im_clamp * np.abs(w)), w.real + 0j, w)
    if np.any(w.imag < 0):
        raise LowerHalfSpectrum("eigenvalue with negative imaginary part")
    if np.any(np.abs(w) == 0):
        raise SingularArgument("zero eigenvalue")
    return V @ np.diag(np.log(w)) @ np.linalg.inv(V)


def det_tr_log_consistency(T, quad: QuadratureConfig | None = None) -> float:
    """|det T - exp(tr log T)| with the integral logarithm."""
    A = _as_square(T)
    L = matlog_integral(A, quad=quad)
    return abs(np.linalg.det(A) - np.exp(np.trace(L)))
