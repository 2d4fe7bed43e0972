"""Selfadjoint boundary parameters in C^n and the resolvent factor (Theta - M)^{-1}.

A boundary parameter is either a Hermitian matrix Theta (an operator) or a
selfadjoint linear relation encoded by a kernel pair (A, B) through

    Theta = { (u, v) : A u = B v }.

The pair covers bounded operators (A = T, B = I), the purely multivalued
relation (A = I, B = 0) that labels the reference extension and forces a
trivial scattering matrix, and mixed boundary conditions.  Selfadjointness of
the relation is equivalent to A B* = B A* together with rank (A|B) = n; use
:func:`check_selfadjoint` to audit a parameter, construction itself only
rejects malformed shapes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NotOperator, SpectralPoint

__all__ = [
    "MATRIX",
    "KERNEL_PAIR",
    "BoundaryParameter",
    "relation_resolvent",
    "relation_condition",
    "check_selfadjoint",
]

MATRIX = "matrix"
KERNEL_PAIR = "kernel_pair"

_TOL = 1e-12


def _canonical_rows(A: np.ndarray, B: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormalise the rows of the n x 2n block (A|B).

    Left multiplication by an invertible matrix does not change the relation,
    so the stored representative has orthonormal rows for conditioning.  Uses
    a column-pivoted QR of the conjugate transpose.  Callers guarantee the
    block has full rank.
    """
    n = A.shape[0]
    Q, _, _ = scipy.linalg.qr(np.hstack([A, B]).conj().T, mode="economic", pivoting=True)
    canon = Q.conj().T
    return np.ascontiguousarray(canon[:, :n]), np.ascontiguousarray(canon[:, n:])


def _symmetry_defect(A: np.ndarray, B: np.ndarray) -> float:
    return float(np.linalg.norm(A @ B.conj().T - B @ A.conj().T, 2))


@dataclass(frozen=True)
class BoundaryParameter:
    """Selfadjoint relation in C^n, stored as matrix or canonical kernel pair."""

    kind: str
    A: np.ndarray
    B: np.ndarray
    matrix: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def from_matrix(cls, T) -> "BoundaryParameter":
        T = np.atleast_2d(np.asarray(T, dtype=complex))
        if T.shape[0] != T.shape[1]:
            raise ValueError("matrix boundary parameter must be square")
        if np.linalg.norm(T - T.conj().T, 2) > _TOL * max(1.0, np.linalg.norm(T, 2)):
            raise ValueError("matrix boundary parameter must be Hermitian")
        T = 0.5 * (T + T.conj().T)
        return cls(kind=MATRIX, A=T, B=np.eye(T.shape[0], dtype=complex), matrix=T)

    @classmethod
    def from_kernel_pair(cls, A, B) -> "BoundaryParameter":
        A = np.atleast_2d(np.asarray(A, dtype=complex))
        B = np.atleast_2d(np.asarray(B, dtype=complex))
        if A.shape != B.shape or A.shape[0] != A.shape[1]:
            raise ValueError("kernel pair must be two square matrices of equal size")
        n = A.shape[0]
        scale = max(1.0, np.linalg.norm(A, 2), np.linalg.norm(B, 2))
        full_rank = np.linalg.matrix_rank(np.hstack([A, B]), tol=_TOL * scale) == n
        if full_rank and _symmetry_defect(A, B) <= _TOL * scale**2:
            A, B = _canonical_rows(A, B)
        return cls(kind=KERNEL_PAIR, A=A, B=B)

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def is_operator(self) -> bool:
        """True iff the relation is single-valued (ker B = {0})."""
        if self.kind == MATRIX:
            return True
        sv = np.linalg.svd(self.B, compute_uv=False)
        return bool(sv.min() > _TOL * max(1.0, sv.max()))

    def to_matrix(self) -> np.ndarray:
        """Hermitian matrix of the relation when it is an operator."""
        if self.kind == MATRIX:
            return self.matrix
        if not self.is_operator():
            raise NotOperator("relation is multivalued; no bounded operator represents it")
        T = np.linalg.solve(self.B, self.A)
        return 0.5 * (T + T.conj().T)


def relation_resolvent(theta: BoundaryParameter, M) -> np.ndarray:
    """(Theta - M)^{-1} for an operator Theta; (A - B M)^{-1} B for a relation.

    Raises :class:`SpectralPoint` (with the condition number) when the
    inversion is numerically singular: lambda is then a spectral point of the
    extension labelled by Theta.
    """
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if theta.kind == MATRIX:
        lhs = theta.matrix - M
        rhs = np.eye(theta.dim, dtype=complex)
    else:
        lhs = theta.A - theta.B @ M
        rhs = theta.B
    cond = np.linalg.cond(lhs)
    if not np.isfinite(cond) or cond > 1e14:
        raise SpectralPoint(f"Theta - M numerically singular (cond={cond:.3e})", cond=cond)
    return np.linalg.solve(lhs, rhs)


def relation_condition(theta: BoundaryParameter, M) -> float:
    """Condition number of the matrix inverted by :func:`relation_resolvent`."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    lhs = theta.matrix - M if theta.kind == MATRIX else theta.A - theta.B @ M
    return float(np.linalg.cond(lhs))


def check_selfadjoint(theta: BoundaryParameter) -> dict:
    """Verify the selfadjointness invariants; returns a report with violations."""
    violations = []
    if theta.kind == MATRIX:
        dev = np.linalg.norm(theta.matrix - theta.matrix.conj().T, 2)
        if dev > _TOL * max(1.0, np.linalg.norm(theta.matrix, 2)):
            violations.append({"kind": "not_hermitian", "norm": float(dev)})
    else:
        A, B = theta.A, theta.B
        scale = max(1.0, np.linalg.norm(A, 2), np.linalg.norm(B, 2))
        sym = _symmetry_defect(A, B)
        if sym > _TOL * scale**2:
            violations.append({"kind": "symmetry_defect", "norm": sym})
        rank = np.linalg.matrix_rank(np.hstack([A, B]), tol=_TOL * scale)
        if rank < theta.dim:
            violations.append({"kind": "rank_deficient", "norm": float(theta.dim - rank)})
    return {"ok": not violations, "violations": violations}
