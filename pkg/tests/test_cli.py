import json
import math

import numpy as np
import pytest

from weylscatter.cli import (
    RunConfig,
    build_grid,
    build_model,
    build_theta,
    cmd_recover_theta,
    cmd_scatter,
    cmd_ssf,
    cmd_verify,
    config_hash,
    load_config,
    main,
    rows_to_csv,
    rows_to_json,
)
from weylscatter.errors import ConfigError
from weylscatter.models import DiracModel, MatrixSchrodingerModel, PointInteractionModel


def base_config(**overrides):
    data = {
        "model": {"kind": "free_scalar", "n": 1},
        "theta": {"kind": "matrix", "re": [[2.0]], "im": [[0.0]]},
        "grid": {"start": 1.0, "stop": 9.0, "points": 3, "scale": "linear", "nudge": 1e-6},
        "quad": {"tol": 1e-9, "cond_cap": 1e12},
        "outputs": {"format": "csv", "path": None},
    }
    data.update(overrides)
    return data


def write_config(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


class TestConfig:
    def test_round_trip_identity(self):
        cfg = RunConfig.from_dict(base_config())
        again = RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
        assert again == cfg
        assert config_hash(again) == config_hash(cfg)

    def test_bad_points(self):
        with pytest.raises(ConfigError, match="grid.points"):
            RunConfig.from_dict(base_config(grid={"start": 1.0, "stop": 2.0, "points": 0}))

    def test_bad_order(self):
        with pytest.raises(ConfigError, match="grid.start"):
            RunConfig.from_dict(base_config(grid={"start": 2.0, "stop": 1.0, "points": 2}))

    def test_unknown_model(self):
        with pytest.raises(ConfigError, match="model.kind"):
            RunConfig.from_dict(base_config(model={"kind": "bogus"}))

    def test_unknown_theta_kind(self):
        with pytest.raises(ConfigError, match="theta.kind"):
            RunConfig.from_dict(base_config(theta={"kind": "bogus"}))

    def test_env_quad_override(self, monkeypatch):
        monkeypatch.setenv("WEYL_SCATTER_QUAD_TOL", "1e-7")
        cfg = RunConfig.from_dict(base_config())
        assert cfg.quad.tol == 1e-7

    def test_missing_file(self):
        with pytest.raises(ConfigError, match="not found"):
            load_config("/nonexistent/path.json")


class TestBuilders:
    def test_model_kinds(self):
        assert build_model({"kind": "dirac", "a": 1.0}).a == 1.0
        m = build_model(
            {
                "kind": "schrodinger_matrix",
                "n": 1,
                "potential": {"kind": "constant_well", "v0": 1.0, "width": 1.0},
                "ode_tol": 1e-9,
            }
        )
        assert isinstance(m, MatrixSchrodingerModel)
        p = build_model({"kind": "point_interaction", "inner": {"kind": "free_scalar", "n": 2}})
        assert isinstance(p, PointInteractionModel) and p.dim == 2

    def test_theta_kernel_pair(self):
        theta = build_theta(
            {"kind": "kernel_pair", "A_re": [[1.0, 0], [0, 0]], "B_re": [[0, 0], [0, 1.0]]}
        )
        assert theta.kind == "kernel_pair"

    def test_grid_nudges_off_singular(self):
        from weylscatter.cli import GridConfig

        pts, moved = build_grid(GridConfig(start=-1.0, stop=1.0, points=3), avoid=(0.0,))
        assert moved == [(0.0, 1e-6)]
        assert 0.0 not in pts

    def test_log_grid(self):
        from weylscatter.cli import GridConfig

        pts, _ = build_grid(GridConfig(start=0.01, stop=100.0, points=5, scale="log"))
        assert pts[0] == pytest.approx(0.01)
        assert pts[-1] == pytest.approx(100.0)


class TestCommands:
    def test_scatter_values(self):
        cfg = RunConfig.from_dict(base_config())
        rows = cmd_scatter(cfg)
        for row in rows:
            s = complex(row.s_entries[0, 0])
            root = math.sqrt(row.lam)
            expected = (2 + 1j * root) / (2 - 1j * root)
            assert s == pytest.approx(expected, abs=1e-12)
            assert math.isnan(row.xi)

    def test_scatter_reference_extension(self):
        cfg = RunConfig.from_dict(
            base_config(theta={"kind": "kernel_pair", "A_re": [[1.0]], "B_re": [[0.0]]})
        )
        rows = cmd_scatter(cfg)
        assert all(complex(r.s_entries[0, 0]) == 1.0 for r in rows)

    def test_dirac_gap_rows(self):
        cfg = RunConfig.from_dict(
            base_config(
                model={"kind": "dirac", "a": 1.0},
                theta={"kind": "matrix", "re": [[1.0, 0.0], [0.0, 1.0]]},
                grid={"start": -0.8, "stop": 0.8, "points": 5},
            )
        )
        rows = cmd_scatter(cfg)
        assert all(r.rank == 0 and r.det == 1.0 for r in rows)

    def test_ssf_values(self):
        cfg = RunConfig.from_dict(
            base_config(theta={"kind": "matrix", "re": [[1.0]]}, grid={"start": 1.0, "stop": 1.0 + 1e-12, "points": 1})
        )
        rows = cmd_ssf(cfg)
        assert rows[0].xi == pytest.approx(0.75, abs=1e-8)
        assert rows[0].bk_residual <= 1e-10

    def test_ssf_neumann_sequence(self):
        cfg = RunConfig.from_dict(
            base_config(theta={"kind": "matrix", "re": [[0.0]]}, grid={"start": 1.0, "stop": 4.0, "points": 2})
        )
        rows = cmd_ssf(cfg)
        assert [r.xi for r in rows] == pytest.approx([0.5, 0.5], abs=1e-9)

    def test_ssf_rejects_relation(self):
        from weylscatter.errors import NotOperator

        cfg = RunConfig.from_dict(
            base_config(theta={"kind": "kernel_pair", "A_re": [[1.0]], "B_re": [[0.0]]})
        )
        with pytest.raises(NotOperator):
            cmd_ssf(cfg)

    def test_jobs_preserve_order(self):
        cfg = RunConfig.from_dict(base_config(grid={"start": 1.0, "stop": 9.0, "points": 9}))
        seq = cmd_ssf(cfg, jobs=1)
        par = cmd_ssf(cfg, jobs=4)
        assert [r.lam for r in par] == [r.lam for r in seq]
        assert [r.xi for r in par] == pytest.approx([r.xi for r in seq])

    def test_recover_theta(self):
        cfg = RunConfig.from_dict(
            base_config(
                model={"kind": "dirac", "a": 1.0},
                theta={"kind": "matrix", "re": [[1.0, 0.0], [0.0, 2.0]]},
            )
        )
        report = cmd_recover_theta(cfg)
        assert report["error_norm"] < 1e-3
        assert np.allclose(report["theta_estimate"]["re"], [[1.0, 0.0], [0.0, 2.0]], atol=1e-3)

    def test_recover_theta_off_diagonal(self):
        cfg = RunConfig.from_dict(
            base_config(
                model={"kind": "dirac", "a": 1.0},
                theta={"kind": "matrix", "re": [[0.0, 1.0], [1.0, 0.0]]},
            )
        )
        assert cmd_recover_theta(cfg)["error_norm"] < 1e-3


class TestSerialization:
    def test_csv_block_headers_and_digits(self):
        cfg = RunConfig.from_dict(
            base_config(
                model={"kind": "free_scalar", "n": 1},
                theta={"kind": "matrix", "re": [[1.0]]},
                grid={"start": -4.0, "stop": 4.0, "points": 5},
            )
        )
        text = rows_to_csv(cmd_ssf(cfg), cfg)
        lines = text.strip().splitlines()
        assert lines[0].startswith("# weyl-scatter sweep, config sha256:")
        assert sum(1 for ln in lines if ln.startswith("# rank block")) >= 2  # gap and ac blocks
        data = [ln for ln in lines if not ln.startswith("#")]
        # gap rows: 7 columns; ac rows: 2*1 + 7 = 9 columns
        widths = {len(ln.split(",")) for ln in data}
        assert widths == {7, 9}
        cell = data[0].split(",")[0]
        assert "." in cell or "e" in cell or cell.lstrip("-").isdigit()
        float(cell)  # locale-independent parseable

    def test_json_rows(self):
        cfg = RunConfig.from_dict(base_config())
        payload = json.loads(rows_to_json(cmd_ssf(cfg), cfg))
        assert payload["config_hash"] == config_hash(cfg)
        assert len(payload["rows"]) == 3
        assert payload["rows"][0]["rank"] == 1


class TestMain:
    def test_scatter_to_file(self, tmp_path):
        cfg_path = write_config(tmp_path, base_config())
        out = tmp_path / "out.csv"
        assert main(["scatter", "--config", cfg_path, "--out", str(out)]) == 0
        assert out.read_text().startswith("# weyl-scatter")

    def test_ssf_json_format(self, tmp_path, capsys):
        cfg_path = write_config(tmp_path, base_config())
        assert main(["ssf", "--config", cfg_path, "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["rows"][0]["xi"] is not None

    def test_config_error_exit_code(self, tmp_path):
        cfg_path = write_config(tmp_path, base_config(model={"kind": "bogus"}))
        assert main(["scatter", "--config", cfg_path]) == 1

    def test_invalid_json_exit_code(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["scatter", "--config", str(path)]) == 1

    def test_usage_error_exit_code(self):
        assert main(["unknown-command"]) == 1

    def test_recover_theta_cli(self, tmp_path, capsys):
        cfg_path = write_config(
            tmp_path,
            base_config(
                model={"kind": "dirac", "a": 1.0},
                theta={"kind": "matrix", "re": [[0.0, 0.0], [0.0, 0.0]]},
            ),
        )
        assert main(["recover-theta", "--config", cfg_path]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["error_norm"] < 1e-3


class TestVerify:
    def test_report_structure_and_pass(self):
        report = cmd_verify(None)
        names = [c["check_name"] for c in report["checks"]]
        assert names == [
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
        ]
        assert report["pass"]
        assert all(c["points_tested"] > 0 for c in report["checks"])

    def test_corrupted_model_fails_nevanlinna(self):
        from weylscatter.verify import run_verification
        from weylscatter.weyl import WeylFunctionModel, branch_sqrt

        class Corrupted(WeylFunctionModel):
            dim = 1

            def _raw(self, z):
                return np.conj(1j * branch_sqrt(z)) * np.eye(1)

        checks = {c.check_name: c for c in run_verification(extra_models=[Corrupted()])}
        assert not checks["nevanlinna_validation"].passed
