import cmath

import numpy as np
import pytest

from weylscatter.errors import BandEdge, EvaluationDomain
from weylscatter.models import (
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
from weylscatter.weyl import branch_sqrt


def well_oracle(v0, width, lam):
    """Closed-form Jost data of the constant well: free data at x = width
    propagated to 0 through the constant-coefficient equation with
    kappa = sqrt(lam - v0)."""
    rt = branch_sqrt(lam)
    kap = branch_sqrt(lam - v0)
    A = (1 + rt / kap) / 2 * cmath.exp(1j * (rt - kap) * width)
    B = (1 - rt / kap) / 2 * cmath.exp(1j * (rt + kap) * width)
    E0 = A + B
    E0p = 1j * kap * (A - B)
    return E0, E0p, E0p / E0


class TestFreeM:
    def test_scalar_positive(self):
        assert free_m(1, 4.0)[0, 0] == pytest.approx(2j)

    def test_matrix_negative(self):
        assert np.allclose(free_m(2, -1.0), -np.eye(2))

    def test_zero(self):
        assert np.allclose(free_m(1, 0.0), 0.0)


class TestJostSolution:
    def test_free_real(self):
        model = MatrixSchrodingerModel(ZeroPotential(1), ode_tol=1e-10)
        E0, E0p = jost_solution(model, 4.0)
        assert E0[0, 0] == pytest.approx(1.0, abs=1e-9)
        assert E0p[0, 0] == pytest.approx(2j, abs=1e-9)

    def test_free_complex(self):
        model = MatrixSchrodingerModel(ZeroPotential(1), ode_tol=1e-10)
        E0, E0p = jost_solution(model, 1j)
        assert E0[0, 0] == pytest.approx(1.0, abs=1e-9)
        assert E0p[0, 0] == pytest.approx(1j * branch_sqrt(1j), abs=1e-9)

    def test_constant_well_against_oracle(self):
        model = MatrixSchrodingerModel(ConstantWell(1.0, 1.0), ode_tol=1e-10)
        for lam in (2.0, 9.0, 50.0):
            E0, E0p = jost_solution(model, lam)
            oE0, oE0p, _ = well_oracle(1.0, 1.0, lam)
            assert E0[0, 0] == pytest.approx(oE0, abs=1e-8)
            assert E0p[0, 0] == pytest.approx(oE0p, abs=1e-8)

    def test_zero_excluded(self):
        model = MatrixSchrodingerModel(ZeroPotential(1))
        with pytest.raises(EvaluationDomain):
            jost_solution(model, 0.0)

    def test_type_guard(self):
        with pytest.raises(TypeError):
            jost_solution(FreeHalfLineModel(1), 1.0)


class TestSchrodingerM:
    def test_free_is_isqrt(self):
        model = MatrixSchrodingerModel(ZeroPotential(2), ode_tol=1e-10)
        for lam in (1.0, 4.0, 25.0, 100.0):
            M = schrodinger_m(model, lam)
            assert np.max(np.abs(M - free_m(2, lam))) <= 10 * model.ode_tol

    def test_constant_well_oracle_real_and_complex(self):
        model = MatrixSchrodingerModel(ConstantWell(1.0, 1.0), ode_tol=1e-10)
        rng = np.random.default_rng(12)
        for _ in range(20):
            lam = float(rng.uniform(1.5, 60.0))
            _, _, om = well_oracle(1.0, 1.0, lam)
            assert schrodinger_m(model, lam)[0, 0] == pytest.approx(om, abs=10 * model.ode_tol * 10)
        for _ in range(20):
            lam = complex(rng.uniform(-4, 8), rng.uniform(0.2, 4.0))
            _, _, om = well_oracle(1.0, 1.0, lam)
            assert schrodinger_m(model, lam)[0, 0] == pytest.approx(om, abs=10 * model.ode_tol * 10)

    def test_channel_decoupling(self):
        # diagonal potential: M is diagonal and each entry equals the scalar value
        model = MatrixSchrodingerModel(ConstantWell([1.0, 2.5], 1.0), ode_tol=1e-10)
        s1 = MatrixSchrodingerModel(ConstantWell(1.0, 1.0), ode_tol=1e-10)
        s2 = MatrixSchrodingerModel(ConstantWell(2.5, 1.0), ode_tol=1e-10)
        for lam in (4.0, 30.0, 1 + 1j):
            M = schrodinger_m(model, lam)
            assert abs(M[0, 1]) <= 10 * model.ode_tol
            assert abs(M[1, 0]) <= 10 * model.ode_tol
            assert M[0, 0] == pytest.approx(schrodinger_m(s1, lam)[0, 0], abs=1e-8)
            assert M[1, 1] == pytest.approx(schrodinger_m(s2, lam)[0, 0], abs=1e-8)

    def test_coupled_potential_nevanlinna(self):
        well = ConstantWell(np.array([[1.0, 0.4], [0.4, 2.0]]), 1.0)
        model = MatrixSchrodingerModel(well, ode_tol=1e-9)
        for lam in (1j, 2 + 1j, -1 + 0.5j):
            M = model.eval_upper(lam)
            w = np.linalg.eigvalsh((M - M.conj().T) / 2j)
            assert w.min() > 0

    def test_negative_axis_epsilon_limit(self):
        model = MatrixSchrodingerModel(ConstantWell(1.0, 1.0), ode_tol=1e-10)
        M = model.eval_boundary(-2.0)
        assert np.max(np.abs(M.imag)) < 1e-9
        assert M[0, 0].real < 0


class TestAsymptoticCheck:
    def test_free_zero_deviation(self):
        model = MatrixSchrodingerModel(ZeroPotential(1), ode_tol=1e-10)
        devs = asymptotic_check(model, [1.0, 10.0, 100.0])
        assert max(devs) <= 10 * model.ode_tol

    def test_constant_well_decay(self):
        model = MatrixSchrodingerModel(ConstantWell(1.0, 1.0), ode_tol=1e-10)
        devs = asymptotic_check(model, [1e2, 1e4])
        assert devs[1] < devs[0]

    def test_rejects_dirac(self):
        with pytest.raises(TypeError):
            asymptotic_check(DiracModel(1.0), [1.0, 2.0])


class TestDiracM:
    def test_band_values(self):
        M = dirac_m(1.0, 5.0)
        assert M[0, 0] == pytest.approx(1j * 1.224745, abs=1e-6)
        assert M[1, 1] == pytest.approx(1j * 0.816497, abs=1e-6)

    def test_gap_real(self):
        M = dirac_m(1.0, 0.5)
        assert np.allclose(M.imag, 0.0)
        assert M[0, 0].real == pytest.approx(np.sqrt(3.0))
        assert M[1, 1].real == pytest.approx(-1 / np.sqrt(3.0))

    def test_negative_band(self):
        M = dirac_m(1.0, -5.0)
        assert M[0, 0].imag == pytest.approx(np.sqrt(4.0 / 6.0))
        assert M[1, 1].imag == pytest.approx(np.sqrt(6.0 / 4.0))
        assert M[0, 0].real == pytest.approx(0.0, abs=1e-15)

    def test_im_matches_band_formula_exactly(self):
        # |lambda| > a: Im entries are sqrt|.| of the two ratios, off-diagonal 0
        for lam in (3.0, 17.5, -2.0, -40.0):
            M = dirac_m(1.0, lam)
            r = abs((lam + 1.0) / (lam - 1.0))
            assert abs(M[0, 1]) == 0.0
            assert M[0, 0].imag == pytest.approx(np.sqrt(r), abs=1e-12)
            assert M[1, 1].imag == pytest.approx(1 / np.sqrt(r), abs=1e-12)

    def test_band_edge(self):
        with pytest.raises(BandEdge):
            dirac_m(1.0, 1.0)
        with pytest.raises(BandEdge):
            DiracModel(1.0).eval_boundary(-1.0)


class TestPointInteraction:
    def test_free_inner(self):
        assert point_interaction_m(FreeHalfLineModel(1), 4.0)[0, 0] == pytest.approx(1 + 2j)

    def test_zero(self):
        assert np.allclose(point_interaction_m(FreeHalfLineModel(2), 0.0), np.eye(2))

    def test_well_inner(self):
        inner = MatrixSchrodingerModel(ConstantWell(1.0, 1.0), ode_tol=1e-10)
        _, _, om = well_oracle(1.0, 1.0, 9.0)
        got = point_interaction_m(inner, 9.0)[0, 0]
        assert got == pytest.approx(1 + om, abs=1e-8)

    def test_model_class_matches_op(self):
        model = PointInteractionModel(FreeHalfLineModel(2))
        assert np.allclose(model.eval_boundary(4.0), point_interaction_m(FreeHalfLineModel(2), 4.0))


class TestPotentials:
    def test_exponential_tail_radius(self):
        pot = ExponentialDecay(2.0, 1.5)
        X = pot.support_radius(1e-8)
        assert pot.tail_budget(X) <= 1e-8

    def test_constant_well_requires_hermitian(self):
        with pytest.raises(ValueError):
            ConstantWell(np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0)

    def test_tabulated_csv_roundtrip(self, tmp_path):
        # 2x2 Hermitian hat potential tabulated on three nodes
        nodes = [0.0, 0.5, 1.0]
        vals = [np.zeros((2, 2)), np.array([[1.0, 0.25j], [-0.25j, 0.5]]), np.zeros((2, 2))]
        lines = []
        for x, Q in zip(nodes, vals):
            row = [x, *np.asarray(Q).real.ravel(), *np.asarray(Q).imag.ravel()]
            lines.append(",".join(f"{v:.17g}" for v in row))
        path = tmp_path / "pot.csv"
        path.write_text("\n".join(lines) + "\n")

        pot = TabulatedPotential.from_csv(path, 2)
        assert np.allclose(pot(0.5), vals[1])
        assert np.allclose(pot(0.25), 0.5 * vals[1])  # linear interpolation
        assert np.allclose(pot(2.0), 0.0)  # zero extension
        model = MatrixSchrodingerModel(pot, ode_tol=1e-9)
        M = model.eval_boundary(4.0)
        w = np.linalg.eigvalsh((M - M.conj().T) / 2j)
        assert w.min() > 0

    def test_exponential_scalar_well_nevanlinna(self):
        model = MatrixSchrodingerModel(ExponentialDecay(-1.0, 2.0), ode_tol=1e-9)
        M = model.eval_upper(1 + 1j)
        assert ((M - M.conj().T) / 2j)[0, 0].real > 0
