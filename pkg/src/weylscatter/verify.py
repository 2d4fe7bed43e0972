"""Verification battery for the structural identities of the pipeline.

Each check samples one or more model families on small grids and reports the
worst residual together with a pass flag at the documented tolerance.  The
checks are the machine-facing counterpart of the invariant suites in the
tests; the CLI ``verify`` subcommand serialises the report as JSON.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cxlinalg import QuadratureConfig, antihermitian_part
from .errors import WeylScatterError
from .models import (
    ConstantWell,
    DiracModel,
    FreeHalfLineModel,
    MatrixSchrodingerModel,
    PointInteractionModel,
    asymptotic_check,
)
from .relations import MATRIX, BoundaryParameter
from .scattering import dirac_theta_recovery, smatrix, smatrix_factorized, smatrix_scalar_type
from .ssf import (
    AC,
    GAP,
    dirac_thresholds,
    free_thresholds,
    gap_count,
    ssf_point,
    trace_formula_check,
    xi,
    xi_closed_form_dirac,
    xi_closed_form_free,
)
from .weyl import validate_nevanlinna

__all__ = ["CheckResult", "run_verification", "CHECK_NAMES"]

CHECK_NAMES = (
    "unitarity",
    "birman_krein",
    "scalar_type_agreement",
    "factorization_similarity",
    "gap_integrality",
    "closed_form_agreement",
    "asymptotic_decay",
    "trace_formula",
    "nevanlinna_validation",
    "theta_recovery",
)


@dataclass
class CheckResult:
    check_name: str
    points_tested: int
    max_residual: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "points_tested": self.points_tested,
            "max_residual": self.max_residual,
            "pass": self.passed,
        }


def _nudge(points, avoid, nudge: float = 1e-6):
    pts = []
    for x in points:
        for s in avoid:
            if abs(x - s) < nudge:
                x = s + nudge
        pts.append(float(x))
    return pts


def _thetas(n: int) -> list[BoundaryParameter]:
    if n == 1:
        vals = [-2.0, 0.0, 1.0, 5.0, 0.5]
        return [BoundaryParameter.from_matrix([[v]]) for v in vals]
    mats = [
        np.zeros((n, n)),
        np.eye(n),
        np.diag([1.0, -1.0] * (n // 2) + ([2.0] if n % 2 else [])),
        np.full((n, n), 0.5) + np.diag(np.arange(1.0, n + 1.0)),
        np.diag(np.linspace(-1.5, 2.5, n)),
    ]
    return [BoundaryParameter.from_matrix(0.5 * (m + m.conj().T)) for m in mats]


def _theta_eigs(theta: BoundaryParameter) -> np.ndarray:
    return np.linalg.eigvalsh(theta.matrix)


def _default_bundle(quad: QuadratureConfig):
    free1 = FreeHalfLineModel(1)
    free2 = FreeHalfLineModel(2)
    well = MatrixSchrodingerModel(ConstantWell(1.0, 1.0), ode_tol=1e-10)
    dirac = DiracModel(1.0)
    point = PointInteractionModel(FreeHalfLineModel(2))

    ac_half = list(np.geomspace(0.05, 50.0, 12))
    bundle = []
    for model, name in ((free1, "free_scalar"), (free2, "free_matrix"), (well, "schrodinger"), (point, "point_interaction")):
        bundle.append(
            {
                "name": name,
                "model": model,
                "thetas": _thetas(model.dim),
                "ac_grid": ac_half,
                "gap_grid": list(np.linspace(-6.0, -0.05, 8)),
            }
        )
    dirac_ac = list(np.linspace(-6.0, -1.05, 6)) + list(np.linspace(1.05, 6.0, 6))
    bundle.append(
        {
            "name": "dirac",
            "model": dirac,
            "thetas": _thetas(2),
            "ac_grid": dirac_ac,
            "gap_grid": list(np.linspace(-0.93, 0.93, 9)),
        }
    )
    return bundle


def run_verification(
    quad: QuadratureConfig | None = None,
    extra_models: list | None = None,
    seed: int = 2061,
) -> list[CheckResult]:
    """Run the full battery; returns one :class:`CheckResult` per check."""
    quad = quad or QuadratureConfig()
    rng = np.random.default_rng(seed)
    bundle = _default_bundle(quad)
    results = []

    # unitarity ------------------------------------------------------------
    worst, npts = 0.0, 0
    for entry in bundle:
        for theta in entry["thetas"]:
            for lam in entry["ac_grid"]:
                sp = _ssf_or_none(entry["model"], theta, lam, quad)
                if sp is None or sp.scattering is None or sp.regime != AC:
                    continue
                S = sp.scattering.S_reduced
                if sp.scattering.cond >= 1e10 or sp.scattering.rank == 0:
                    continue
                res = np.linalg.norm(S.conj().T @ S - np.eye(S.shape[0]), 2)
                worst = max(worst, float(res))
                npts += 1
    results.append(CheckResult("unitarity", npts, worst, worst <= 1e-10))

    # birman_krein ----------------------------------------------------------
    worst, npts = 0.0, 0
    for entry in bundle:
        for theta in entry["thetas"]:
            if theta.kind != MATRIX:
                continue
            for lam in entry["ac_grid"] + entry["gap_grid"]:
                sp = _ssf_or_none(entry["model"], theta, lam, quad)
                if sp is None or math.isnan(sp.xi):
                    continue
                worst = max(worst, sp.bk_residual)
                npts += 1
    results.append(CheckResult("birman_krein", npts, worst, worst <= 1e-8))

    # scalar_type_agreement --------------------------------------------------
    worst, npts = 0.0, 0
    for entry in bundle:
        if entry["name"] not in ("free_scalar", "free_matrix", "point_interaction"):
            continue
        model = entry["model"]
        for theta in entry["thetas"]:
            for lam in entry["ac_grid"]:
                M = model.eval_boundary(lam)
                m_scalar = complex(M[0, 0])
                if m_scalar.imag == 0:
                    continue
                S_a = smatrix(M, theta).S_full
                S_b = smatrix_scalar_type(m_scalar, theta, model.dim)
                worst = max(worst, float(np.max(np.abs(S_a - S_b))))
                npts += 1
    results.append(CheckResult("scalar_type_agreement", npts, worst, worst <= 1e-12))

    # factorization_similarity ------------------------------------------------
    worst, npts = 0.0, 0
    for entry in bundle:
        model = entry["model"]
        for theta in entry["thetas"]:
            for lam in entry["ac_grid"]:
                M = model.eval_boundary(lam)
                W = antihermitian_part(M)
                if np.linalg.eigvalsh(W).min() <= 1e-8:
                    continue
                sp = smatrix(M, theta, lam=lam)
                S_f = smatrix_factorized(M, M.conj().T, theta)
                ev_a = np.sort_complex(np.linalg.eigvals(S_f))
                ev_b = np.sort_complex(np.linalg.eigvals(sp.S_reduced))
                worst = max(worst, float(np.max(np.abs(ev_a - ev_b))))
                npts += 1
    results.append(CheckResult("factorization_similarity", npts, worst, worst <= 1e-9))

    # gap_integrality ----------------------------------------------------------
    worst, npts = 0.0, 0
    for entry in bundle:
        for theta in entry["thetas"]:
            if theta.kind != MATRIX:
                continue
            eigs = _theta_eigs(theta)
            if entry["name"] == "dirac":
                avoid = dirac_thresholds(1.0, float(eigs[0]), float(eigs[-1]))
            else:
                avoid = free_thresholds(eigs)
            for lam in _nudge(entry["gap_grid"], avoid):
                sp = _ssf_or_none(entry["model"], theta, lam, quad)
                if sp is None or sp.regime != GAP or math.isnan(sp.xi):
                    continue
                M = entry["model"].eval_boundary(lam)
                count = gap_count(M, theta)
                worst = max(worst, abs(sp.xi - count))
                if sp.scattering is not None:
                    worst = max(worst, abs(sp.scattering.det_S - 1.0))
                npts += 1
    results.append(CheckResult("gap_integrality", npts, worst, worst <= 1e-8))

    # closed_form_agreement -----------------------------------------------------
    worst, npts = 0.0, 0
    for entry in bundle:
        model = entry["model"]
        if entry["name"] in ("free_scalar", "free_matrix", "point_interaction", "dirac"):
            for theta in entry["thetas"]:
                eigs = _theta_eigs(theta)
                if entry["name"] == "dirac":
                    if np.max(np.abs(theta.matrix - np.diag(np.diag(theta.matrix)))) > 0:
                        continue  # closed form needs a diagonal parameter
                    th1, th2 = float(theta.matrix[0, 0].real), float(theta.matrix[1, 1].real)
                    avoid = dirac_thresholds(1.0, th1, th2)
                    closed = lambda lam: xi_closed_form_dirac(1.0, th1, th2, lam)
                elif entry["name"] == "point_interaction":
                    shifted = eigs - 1.0
                    avoid = free_thresholds(shifted)
                    closed = lambda lam, e=shifted: xi_closed_form_free(e, lam)
                else:
                    avoid = free_thresholds(eigs)
                    closed = lambda lam, e=eigs: xi_closed_form_free(e, lam)
                for lam in _nudge(entry["ac_grid"] + entry["gap_grid"], avoid):
                    sp = _ssf_or_none(model, theta, lam, quad)
                    if sp is None or math.isnan(sp.xi):
                        continue
                    worst = max(worst, abs(sp.xi - closed(lam)))
                    npts += 1
    results.append(CheckResult("closed_form_agreement", npts, worst, worst <= 1e-8))

    # asymptotic_decay ------------------------------------------------------------
    well = next(e for e in bundle if e["name"] == "schrodinger")["model"]
    devs = asymptotic_check(well, [1e2, 1e3, 1e4])
    decay_ok = all(b < a for a, b in zip(devs, devs[1:])) and devs[-1] < 0.2
    results.append(CheckResult("asymptotic_decay", len(devs), float(devs[-1]), decay_ok))

    # trace_formula ----------------------------------------------------------------
    worst, npts = 0.0, 0
    for entry in bundle:
        model = entry["model"]
        theta = entry["thetas"][2]
        for lam in (0.5 + 1j, -1.0 + 2j, 2.0 + 0.5j, 3j):
            res = trace_formula_check(model, theta, lam, quad=quad)
            worst = max(worst, res)
            npts += 1
    results.append(CheckResult("trace_formula", npts, worst, worst <= 1e-5))

    # nevanlinna_validation -----------------------------------------------------------
    worst, npts, ok = 0.0, 0, True
    models = [e["model"] for e in bundle] + list(extra_models or [])
    for model in models:
        pts = rng.uniform(-5, 5, size=20) + 1j * rng.uniform(0.1, 4.0, size=20)
        report = validate_nevanlinna(model, pts)
        npts += len(pts)
        if report:
            ok = False
            worst = max(worst, max(abs(v.magnitude) for v in report))
    results.append(CheckResult("nevanlinna_validation", npts, worst, ok))

    # theta_recovery ---------------------------------------------------------------
    dirac = next(e for e in bundle if e["name"] == "dirac")["model"]
    worst, npts = 0.0, 0
    for _ in range(5):
        X = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        T = 0.5 * (X + X.conj().T)
        theta = BoundaryParameter.from_matrix(T)
        sp = smatrix(dirac.eval_boundary(1e8), theta)
        err = np.linalg.norm(dirac_theta_recovery(sp.S_full) - T, 2)
        worst = max(worst, float(err))
        npts += 1
    results.append(CheckResult("theta_recovery", npts, worst, worst <= 1e-3))

    return results


def _ssf_or_none(model, theta, lam, quad):
    try:
        return ssf_point(model, theta, lam, quad=quad)
    except WeylScatterError:
        return None
