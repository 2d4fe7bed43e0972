"""Matrix Nevanlinna (Weyl) functions: upper-half-plane evaluation and boundary values.

A model is an evaluatable map ``lambda -> M(lambda)`` defined for
``Im(lambda) >= 0`` away from a declared singular set on the real axis.  Off
the singular set the boundary value ``M(lambda + i0)`` is obtained either by
direct evaluation of the defining formula at real ``lambda`` (all shipped
closed-form models extend continuously) or, as a fallback, by Richardson
extrapolation of ``M(lambda + i*eps)`` for decreasing ``eps``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .cxlinalg import antihermitian_part
from .errors import BoundaryLimitFailed, EvaluationDomain, SingularPoint

__all__ = [
    "branch_sqrt",
    "WeylFunctionModel",
    "NevanlinnaViolation",
    "validate_nevanlinna",
]

DIRECT = "direct"
EPSILON_LIMIT = "epsilon_limit"


def branch_sqrt(z) -> complex:
    """Square root with cut along [0, inf).

    Fixed by Im(sqrt(z)) > 0 for z off the cut and sqrt(z) >= 0 on it, i.e.
    the boundary value from the upper half plane everywhere.
    """
    r = cmath.sqrt(complex(z))
    if r.imag < 0 or (r.imag == 0 and r.real < 0):
        r = -r
    return r


class WeylFunctionModel:
    """Base class for matrix Nevanlinna functions with real boundary values.

    Subclasses implement ``_raw(z)`` for ``Im z >= 0`` off the singular set
    and may override ``singular_points()``.  Evaluation is pure; instances
    are immutable after construction and safe to share across threads.
    """

    #: space dimension n of the values (set by subclasses)
    dim: int = 1
    #: default boundary strategy, DIRECT or EPSILON_LIMIT
    boundary_mode: str = DIRECT
    #: initial offset for the epsilon-limit fallback
    eps0: float = 1e-4
    #: absolute tolerance around singular points
    singular_tol: float = 1e-12

    def _raw(self, z: complex) -> np.ndarray:
        raise NotImplementedError

    def singular_points(self) -> tuple[float, ...]:
        """Real points where the boundary value is not defined."""
        return ()

    def boundary_mode_at(self, lam: float) -> str:
        """Boundary strategy for a given real point (models may vary it)."""
        return self.boundary_mode

    def is_singular(self, lam: float) -> bool:
        return any(abs(lam - s) <= self.singular_tol for s in self.singular_points())

    def eval_upper(self, lam) -> np.ndarray:
        """M(lambda) for Im(lambda) > 0."""
        z = complex(lam)
        if z.imag <= 0:
            raise EvaluationDomain(f"eval_upper requires Im(lambda) > 0, got {z}")
        return self._raw(z)

    def eval_boundary(self, lam: float, mode: str | None = None, return_error: bool = False):
        """Boundary value M(lambda + i0) at real lambda.

        With ``return_error=True`` also returns the estimated extrapolation
        error (0.0 in direct mode).
        """
        lam = float(lam)
        if self.is_singular(lam):
            raise SingularPoint(f"lambda={lam} is a declared singular point")
        mode = mode or self.boundary_mode_at(lam)
        if mode == DIRECT:
            M = self._raw(complex(lam))
            return (M, 0.0) if return_error else M
        if mode != EPSILON_LIMIT:
            raise ValueError(f"unknown boundary mode {mode!r}")

        eps = self.eps0
        f0 = self._raw(complex(lam, eps))
        f1 = self._raw(complex(lam, eps / 2))
        f2 = self._raw(complex(lam, eps / 4))
        # Two Richardson stages: first kills the O(eps) term, second the O(eps^2) one.
        g1 = 2 * f1 - f0
        g2 = 2 * f2 - f1
        h = (4 * g2 - g1) / 3
        err = float(np.max(np.abs(h - g2)))
        if err > 1e-6 * max(1.0, np.linalg.norm(h, 2)):
            raise BoundaryLimitFailed(f"extrapolation error {err:.3e} at lambda={lam}")
        return (h, err) if return_error else h

    def derivative(self, lam, h: float | None = None) -> np.ndarray:
        """dM/dlambda by a central difference along the real direction.

        Requires Im(lambda) > 2h so both evaluation points stay well inside
        the upper half plane.
        """
        z = complex(lam)
        if h is None:
            h = 1e-5 * max(1.0, abs(z))
        if z.imag <= 2 * h:
            raise EvaluationDomain(f"derivative requires Im(lambda) > 2h = {2 * h:.3e}")
        return (self._raw(z + h) - self._raw(z - h)) / (2.0 * h)


@dataclass(frozen=True)
class NevanlinnaViolation:
    lam: complex
    kind: str
    magnitude: float


def validate_nevanlinna(model: WeylFunctionModel, sample_grid) -> list[NevanlinnaViolation]:
    """Check Im M(lambda) > 0 on an upper-half-plane grid.

    Returns the list of violations (empty means the model passed).  Checked
    at each sample: Im M PSD, strictly positive definite, and the
    monotonicity quotient Im M / Im lambda PSD.
    """
    violations = []
    for lam in sample_grid:
        z = complex(lam)
        if z.imag <= 0:
            violations.append(NevanlinnaViolation(z, "grid_point_not_upper", z.imag))
            continue
        M = model.eval_upper(z)
        w = np.linalg.eigvalsh(antihermitian_part(M))
        scale = max(1.0, np.linalg.norm(M, 2))
        if w.min() < -1e-12 * scale:
            violations.append(NevanlinnaViolation(z, "im_not_psd", float(w.min())))
        elif w.min() <= 0:
            violations.append(NevanlinnaViolation(z, "im_not_strictly_pd", float(w.min())))
        if (w / z.imag).min() < -1e-12 * scale:
            violations.append(NevanlinnaViolation(z, "quotient_not_psd", float(w.min() / z.imag)))
    return violations
