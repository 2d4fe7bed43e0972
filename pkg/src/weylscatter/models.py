"""Concrete Weyl-function families.

Four model families are shipped:

* free half-line Schroedinger (scalar or matrix), M(lambda) = i sqrt(lambda) I
* matrix Schroedinger on the half line with an integrable decaying potential,
  M obtained from the Jost solution by backward ODE integration
* the one-dimensional Dirac operator with mass ``a``, a diagonal 2x2 model
  with spectral gap (-a, a)
* three-dimensional point interactions, M_H(lambda) = I + M_inner(lambda)

All evaluators are pure; Schroedinger models memoise the Jost data per
lambda so sweeps over several boundary parameters reuse the ODE solves.
"""

from __future__ import annotations

import cmath
import warnings

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    BandEdge,
    EvaluationDomain,
    SingularJost,
    StepFailure,
    TruncationWarning,
)
from .weyl import DIRECT, EPSILON_LIMIT, WeylFunctionModel, branch_sqrt

__all__ = [
    "ZeroPotential",
    "ConstantWell",
    "ExponentialDecay",
    "TabulatedPotential",
    "FreeHalfLineModel",
    "MatrixSchrodingerModel",
    "DiracModel",
    "PointInteractionModel",
    "free_m",
    "jost_solution",
    "schrodinger_m",
    "asymptotic_check",
    "dirac_m",
    "point_interaction_m",
]


# ---------------------------------------------------------------------------
# potentials


def _as_potential_matrix(value, dim=None) -> np.ndarray:
    A = np.asarray(value, dtype=complex)
    if A.ndim == 0:
        n = dim or 1
        A = A * np.eye(n) if n > 1 else A.reshape(1, 1)
    elif A.ndim == 1:
        A = np.diag(A)
    if A.shape[0] != A.shape[1]:
        raise ValueError("potential value must be square")
    if np.linalg.norm(A - A.conj().T, 2) > 1e-12 * max(1.0, np.linalg.norm(A, 2)):
        raise ValueError("potential value must be Hermitian")
    return A


class ZeroPotential:
    """Q = 0; the free model expressed through the Jost pipeline."""

    def __init__(self, dim: int = 1):
        self.dim = dim
        self.breakpoints: tuple[float, ...] = ()

    def __call__(self, x: float) -> np.ndarray:
        return np.zeros((self.dim, self.dim), dtype=complex)

    def support_radius(self, tol: float) -> float:
        return 0.0

    def tail_budget(self, X: float) -> float:
        return 0.0


class ConstantWell:
    """Q(x) = V for 0 <= x < width, zero beyond.

    ``depth`` may be a scalar (times identity for dim > 1), a sequence of
    per-channel depths, or a full Hermitian matrix.
    """

    def __init__(self, depth, width: float = 1.0, dim: int | None = None):
        if width <= 0:
            raise ValueError("width must be positive")
        self.matrix = _as_potential_matrix(depth, dim)
        self.dim = self.matrix.shape[0]
        self.width = float(width)
        self.breakpoints = (self.width,)
        self._zero = np.zeros_like(self.matrix)

    def __call__(self, x: float) -> np.ndarray:
        return self.matrix if 0.0 <= x < self.width else self._zero

    def support_radius(self, tol: float) -> float:
        return self.width

    def tail_budget(self, X: float) -> float:
        if X >= self.width:
            return 0.0
        nrm = np.linalg.norm(self.matrix, 2)
        return nrm * (self.width - X) * (1.0 + self.width)


class ExponentialDecay:
    """Q(x) = A * exp(-rate * x) for a Hermitian amplitude A."""

    def __init__(self, amplitude, rate: float, dim: int | None = None):
        if rate <= 0:
            raise ValueError("rate must be positive")
        self.matrix = _as_potential_matrix(amplitude, dim)
        self.dim = self.matrix.shape[0]
        self.rate = float(rate)
        self.breakpoints: tuple[float, ...] = ()

    def __call__(self, x: float) -> np.ndarray:
        return self.matrix * np.exp(-self.rate * x)

    def tail_budget(self, X: float) -> float:
        # integral_X^inf (1+x) |A| e^{-rate x} dx, closed form
        nrm = np.linalg.norm(self.matrix, 2)
        k = self.rate
        return nrm * np.exp(-k * X) * ((1.0 + X) / k + 1.0 / k**2)

    def support_radius(self, tol: float) -> float:
        # fixed point of tail_budget(X) = tol, i.e.
        # X = log( |A| ((1+X)/k + 1/k^2) / tol ) / k
        nrm = max(np.linalg.norm(self.matrix, 2), 1e-300)
        k = self.rate
        X = 1.0
        for _ in range(8):
            X = max(1.0, np.log(max(nrm * ((1.0 + X) / k + 1.0 / k**2) / tol, 2.0)) / k)
        return 1.05 * X


class TabulatedPotential:
    """Piecewise-linear Hermitian potential from sample nodes.

    Zero extension beyond the last node.  The CSV layout is one row per node:
    x, then the n^2 row-major entries of Re Q, then the n^2 entries of Im Q.
    """

    def __init__(self, xs, values):
        self.xs = np.asarray(xs, dtype=float)
        if np.any(np.diff(self.xs) <= 0):
            raise ValueError("sample points must be strictly ascending")
        vals = [np.asarray(v, dtype=complex) for v in values]
        self.dim = vals[0].shape[0]
        for v in vals:
            _as_potential_matrix(v)
        self.values = np.array(vals)
        self.breakpoints = tuple(self.xs)

    @classmethod
    def from_csv(cls, path, dim: int) -> "TabulatedPotential":
        data = np.atleast_2d(np.loadtxt(path, delimiter=",", comments="#"))
        n2 = dim * dim
        if data.shape[1] != 1 + 2 * n2:
            raise ValueError(
                f"expected {1 + 2 * n2} columns (x, {n2} Re entries, {n2} Im entries), got {data.shape[1]}"
            )
        xs = data[:, 0]
        re = data[:, 1 : 1 + n2].reshape(-1, dim, dim)
        im = data[:, 1 + n2 :].reshape(-1, dim, dim)
        return cls(xs, re + 1j * im)

    def __call__(self, x: float) -> np.ndarray:
        if x <= self.xs[0]:
            return self.values[0]
        if x >= self.xs[-1]:
            return np.zeros((self.dim, self.dim), dtype=complex)
        out = np.empty((self.dim, self.dim), dtype=complex)
        for i in range(self.dim):
            for j in range(self.dim):
                col = self.values[:, i, j]
                out[i, j] = np.interp(x, self.xs, col.real) + 1j * np.interp(x, self.xs, col.imag)
        return out

    def support_radius(self, tol: float) -> float:
        return float(self.xs[-1])

    def tail_budget(self, X: float) -> float:
        if X >= self.xs[-1]:
            return 0.0
        mask = self.xs >= X
        nrm = max(np.linalg.norm(v, 2) for v in self.values[mask])
        return nrm * (self.xs[-1] - X) * (1.0 + self.xs[-1])


# ---------------------------------------------------------------------------
# models


def free_m(n: int, lam) -> np.ndarray:
    """Weyl function of the free half-line operator: i sqrt(lambda) * I."""
    return 1j * branch_sqrt(lam) * np.eye(n)


class FreeHalfLineModel(WeylFunctionModel):
    """M(lambda) = i sqrt(lambda) I on C^n."""

    def __init__(self, dim: int = 1):
        self.dim = dim
        self.boundary_mode = DIRECT

    def _raw(self, z: complex) -> np.ndarray:
        return free_m(self.dim, z)


class MatrixSchrodingerModel(WeylFunctionModel):
    """Half-line Schroedinger operator with matrix potential, via Jost data.

    The Jost solution solves E'' = (Q - lambda) E with E(x) ~ e^{i x sqrt(lambda)} I
    as x -> infinity; the Weyl function is M = E'(0) E(0)^{-1}.  The solution
    is obtained by adaptive Runge-Kutta integration backward from the
    truncation radius ``X_max`` with the asymptotic initial data, carried out
    in the gauge E * e^{-i sqrt(lambda) X_max} to keep magnitudes tame.
    """

    def __init__(self, potential, X_max: float | None = None, ode_tol: float = 1e-8):
        self.potential = potential
        self.dim = potential.dim
        self.ode_tol = float(ode_tol)
        support = potential.support_radius(self.ode_tol)
        self.X_max = float(X_max) if X_max is not None else max(support, 1.0)
        self.boundary_mode = DIRECT  # positive axis; negatives switch per point
        self._cache: dict[complex, tuple[np.ndarray, np.ndarray]] = {}
        self._check_potential()
        tail = potential.tail_budget(self.X_max)
        if tail > self.ode_tol:
            warnings.warn(
                f"potential tail beyond X_max={self.X_max} estimated at {tail:.3e} > ode_tol",
                TruncationWarning,
                stacklevel=2,
            )

    def _check_potential(self):
        for x in np.linspace(0.0, self.X_max, 17):
            Q = self.potential(float(x))
            if np.linalg.norm(Q - Q.conj().T, 2) > 1e-10 * max(1.0, np.linalg.norm(Q, 2)):
                raise ValueError(f"potential is not Hermitian at x={x}")

    def singular_points(self) -> tuple[float, ...]:
        # lambda = 0 is numerically delicate for the Jost data; negative-axis
        # poles of M announce themselves through SingularJost instead.
        return (0.0,)

    def boundary_mode_at(self, lam: float) -> str:
        return DIRECT if lam > 0 else EPSILON_LIMIT

    def jost(self, lam) -> tuple[np.ndarray, np.ndarray]:
        """(E(0, lambda), E'(0, lambda)) in the genuine Jost normalization."""
        z = complex(lam)
        if z == 0:
            raise EvaluationDomain("lambda = 0 is excluded from the Jost path")
        if z.imag < 0:
            raise EvaluationDomain("Jost solution defined for Im(lambda) >= 0")
        hit = self._cache.get(z)
        if hit is not None:
            return hit

        n = self.dim
        rt = branch_sqrt(z)
        if rt.imag * self.X_max > 600.0:
            raise EvaluationDomain("Im(sqrt(lambda)) * X_max too large; phase restore would overflow")
        z_eye = z * np.eye(n)

        def rhs(x, y):
            E = y[: n * n].reshape(n, n)
            Ep = y[n * n :].reshape(n, n)
            Epp = (self.potential(x) - z_eye) @ E
            return np.concatenate([Ep.ravel(), Epp.ravel()])

        # gauge: Etil = E * exp(-i sqrt(lambda) X_max), so Etil(X_max) = I
        y = np.concatenate([np.eye(n, dtype=complex).ravel(), (1j * rt * np.eye(n)).ravel()])
        cuts = sorted({float(b) for b in self.potential.breakpoints if 0.0 < b < self.X_max})
        stops = [self.X_max, *reversed(cuts), 0.0]
        for a, b in zip(stops[:-1], stops[1:]):
            sol = solve_ivp(
                rhs,
                (a, b),
                y,
                method="DOP853",
                rtol=self.ode_tol,
                atol=self.ode_tol * 1e-3,
            )
            if not sol.success:
                raise StepFailure(f"ODE integration failed on [{b}, {a}]: {sol.message}")
            y = sol.y[:, -1]

        phase = cmath.exp(1j * rt * self.X_max)
        E0 = y[: n * n].reshape(n, n) * phase
        E0p = y[n * n :].reshape(n, n) * phase
        result = (E0, E0p)
        self._cache[z] = result
        return result

    def _raw(self, z: complex) -> np.ndarray:
        E0, E0p = self.jost(z)
        cond = np.linalg.cond(E0)
        if not np.isfinite(cond) or cond > 1e12:
            raise SingularJost(f"E(0, lambda) near-singular (cond={cond:.3e}) at lambda={z}")
        return E0p @ np.linalg.inv(E0)


class DiracModel(WeylFunctionModel):
    """One-dimensional Dirac operator with mass a > 0; 2x2 diagonal Weyl function.

    M(lambda) = diag(i sqrt(lambda+a)/sqrt(lambda-a), i sqrt(lambda-a)/sqrt(lambda+a))
    with each square root taken on the branch cut along [0, inf).  Real
    diagonal (Hermitian) inside the gap (-a, a), purely imaginary diagonal on
    (-inf, -a) and (a, inf).
    """

    def __init__(self, a: float):
        if a <= 0:
            raise ValueError("mass a must be positive")
        self.a = float(a)
        self.dim = 2
        self.boundary_mode = DIRECT

    def singular_points(self) -> tuple[float, ...]:
        return (-self.a, self.a)

    def eval_boundary(self, lam: float, mode: str | None = None, return_error: bool = False):
        if abs(abs(lam) - self.a) <= self.singular_tol:
            raise BandEdge(f"lambda = {lam} is a band edge (+/- {self.a})")
        return super().eval_boundary(lam, mode=mode, return_error=return_error)

    def _raw(self, z: complex) -> np.ndarray:
        return dirac_m(self.a, z)


class PointInteractionModel(WeylFunctionModel):
    """Point interaction in R^3 reduced to a half-line model: M = I + M_inner."""

    def __init__(self, inner: WeylFunctionModel):
        self.inner = inner
        self.dim = inner.dim

    def singular_points(self) -> tuple[float, ...]:
        return self.inner.singular_points()

    def boundary_mode_at(self, lam: float) -> str:
        return self.inner.boundary_mode_at(lam)

    def _raw(self, z: complex) -> np.ndarray:
        return np.eye(self.dim) + self.inner._raw(z)


# ---------------------------------------------------------------------------
# module-level operations (thin wrappers used by tests and the CLI)


def jost_solution(model: MatrixSchrodingerModel, lam) -> tuple[np.ndarray, np.ndarray]:
    if not isinstance(model, MatrixSchrodingerModel):
        raise TypeError("jost_solution expects a MatrixSchrodingerModel")
    return model.jost(lam)


def schrodinger_m(model: MatrixSchrodingerModel, lam) -> np.ndarray:
    if not isinstance(model, MatrixSchrodingerModel):
        raise TypeError("schrodinger_m expects a MatrixSchrodingerModel")
    return model._raw(complex(lam))


def asymptotic_check(model, lam_list) -> list[float]:
    """Deviations ||M(lambda) - i sqrt(lambda) I|| for ascending positive lambda."""
    if not isinstance(model, (MatrixSchrodingerModel, FreeHalfLineModel)):
        raise TypeError("asymptotic_check expects a (matrix) Schroedinger or free model")
    lams = [float(x) for x in lam_list]
    if any(x <= 0 for x in lams) or any(b <= a for a, b in zip(lams, lams[1:])):
        raise ValueError("lambda list must be positive and ascending")
    out = []
    for lam in lams:
        M = model.eval_boundary(lam)
        out.append(float(np.linalg.norm(M - free_m(model.dim, lam), 2)))
    return out


def dirac_m(a: float, lam) -> np.ndarray:
    z = complex(lam)
    if z.imag == 0 and abs(abs(z.real) - a) <= 1e-12:
        raise BandEdge(f"lambda = {z.real} is a band edge (+/- {a})")
    if z.imag < 0:
        raise EvaluationDomain("dirac_m defined for Im(lambda) >= 0")
    rp = branch_sqrt(z + a)
    rm = branch_sqrt(z - a)
    return np.diag([1j * rp / rm, 1j * rm / rp])


def point_interaction_m(inner_model: WeylFunctionModel, lam) -> np.ndarray:
    z = complex(lam)
    if z.imag > 0:
        M = inner_model.eval_upper(z)
    else:
        M = inner_model.eval_boundary(z.real)
    return np.eye(inner_model.dim) + M
