"""End-to-end tests of the command-line surface (in-process)."""

import json

import numpy as np
import pytest

from anovafit import load_termset
from anovafit.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture()
def friedman2_model(tmp_path, capsys):
    path = tmp_path / "model.json"
    code, out, _ = run_cli(
        capsys,
        "fit",
        "--friedman", "2",
        "--ds", "2",
        "--bandwidths", "4,2",
        "--lambda", "0",
        "--seed", "1",
        "--out", str(path),
    )
    assert code == 0
    return path, json.loads(out)


class TestFit:
    def test_friedman1_initial_model_has_76_coefficients(self, tmp_path, capsys):
        path = tmp_path / "model.json"
        code, out, _ = run_cli(
            capsys,
            "fit", "--friedman", "1", "--ds", "2", "--bandwidths", "4,2",
            "--lambda", "3", "--seed", "0", "--out", str(path),
        )
        assert code == 0
        metrics = json.loads(out)
        assert metrics["coefficients"] == 76
        assert metrics["train_size"] == 200
        assert metrics["test_size"] == 1000
        model_obj = read_json(path)
        assert len(model_obj["coefficients"]) == 76
        assert model_obj["basis"] == "cos"

    def test_csv_fit_small_term_set(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        rows = ["a,b,y"] + [
            f"{x:.6f},{z:.6f},{x + z:.6f}"
            for x, z in rng.uniform(size=(30, 2))
        ]
        csv_path = tmp_path / "data.csv"
        csv_path.write_text("\n".join(rows) + "\n")
        model_path = tmp_path / "model.json"
        code, out, _ = run_cli(
            capsys,
            "fit", "--csv", str(csv_path), "--target", "y",
            "--ds", "1", "--bandwidths", "2",
            "--split", "0.8", "--out", str(model_path),
        )
        assert code == 0
        assert json.loads(out)["coefficients"] == 3

    def test_low_oversampling_warns_but_proceeds(self, tmp_path, capsys):
        model_path = tmp_path / "model.json"
        with pytest.warns(UserWarning, match="oversampling"):
            code, out, _ = run_cli(
                capsys,
                "fit", "--friedman", "2", "--ds", "2", "--bandwidths", "8,4",
                "--split", "40:50", "--seed", "0", "--out", str(model_path),
            )
        assert code == 0
        assert json.loads(out)["oversampling"] < 1.0

    def test_byte_identical_reruns(self, tmp_path, capsys):
        path = tmp_path / "model.json"
        args = [
            "fit", "--friedman", "3", "--ds", "2", "--bandwidths", "4,2",
            "--lambda", "2", "--seed", "7", "--out", str(path),
        ]
        _, out_a, _ = run_cli(capsys, *args)
        bytes_a = path.read_bytes()
        _, out_b, _ = run_cli(capsys, *args)
        assert out_a == out_b
        assert bytes_a == path.read_bytes()

    def test_config_errors_exit_2(self, capsys, tmp_path):
        out_path = str(tmp_path / "m.json")
        # no data source
        assert run_cli(capsys, "fit", "--ds", "1", "--bandwidths", "2",
                       "--out", out_path)[0] == 2
        # both sources
        assert run_cli(capsys, "fit", "--friedman", "1", "--csv", "x.csv",
                       "--target", "y", "--ds", "1", "--bandwidths", "2",
                       "--out", out_path)[0] == 2
        # missing bandwidths
        assert run_cli(capsys, "fit", "--friedman", "1", "--ds", "1",
                       "--out", out_path)[0] == 2
        # malformed bandwidths
        assert run_cli(capsys, "fit", "--friedman", "1", "--ds", "1",
                       "--bandwidths", "4,x", "--out", out_path)[0] == 2

    def test_missing_csv_exits_3(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "fit", "--csv", str(tmp_path / "nope.csv"), "--target", "y",
            "--ds", "1", "--bandwidths", "2", "--out", str(tmp_path / "m.json"),
        )
        assert code == 3


class TestRankRefineRoundTrip:
    def test_rank_report(self, friedman2_model, tmp_path, capsys):
        model_path, _ = friedman2_model
        report_path = tmp_path / "report.json"
        code, _, err = run_cli(
            capsys, "rank", "--model", str(model_path), "--out", str(report_path)
        )
        assert code == 0
        report = read_json(report_path)
        assert set(report) == {"variance", "gsi", "ranking"}
        assert len(report["ranking"]) == 4
        np.testing.assert_allclose(sum(report["ranking"]), 1.0, atol=1e-10)
        rhos = [entry["rho"] for entry in report["gsi"]]
        assert rhos == sorted(rhos, reverse=True)
        assert "ranking" in err  # aligned table on stderr

    def test_gsi_threshold_recovers_published_active_set(
        self, friedman2_model, tmp_path, capsys
    ):
        model_path, _ = friedman2_model
        terms_path = tmp_path / "terms.json"
        code, out, _ = run_cli(
            capsys,
            "refine", "--model", str(model_path),
            "--gsi-threshold", "0.02", "--out", str(terms_path),
        )
        assert code == 0
        refined = load_termset(terms_path)
        assert refined.terms == ((), (2,), (3,), (2, 3))
        diff = json.loads(out)
        assert diff["kept"] == 4
        assert [2, 3] not in diff["removed"]

    def test_refit_with_refined_terms(self, friedman2_model, tmp_path, capsys):
        model_path, _ = friedman2_model
        terms_path = tmp_path / "terms.json"
        run_cli(capsys, "refine", "--model", str(model_path),
                "--gsi-threshold", "0.02", "--out", str(terms_path))
        final_path = tmp_path / "final.json"
        code, out, _ = run_cli(
            capsys,
            "fit", "--friedman", "2", "--terms", str(terms_path),
            "--bandwidths", "4,2", "--lambda", "0", "--seed", "1",
            "--out", str(final_path),
        )
        assert code == 0
        assert json.loads(out)["coefficients"] == 8  # 1 + 2*3 + 1

    def test_refine_requires_an_action(self, friedman2_model, tmp_path, capsys):
        model_path, _ = friedman2_model
        code, _, err = run_cli(
            capsys, "refine", "--model", str(model_path),
            "--out", str(tmp_path / "t.json"),
        )
        assert code == 2
        assert "nothing to do" in err

    def test_no_threshold_crossing_leaves_set_unchanged(
        self, friedman2_model, tmp_path, capsys
    ):
        model_path, _ = friedman2_model
        terms_path = tmp_path / "terms.json"
        code, out, err = run_cli(
            capsys, "refine", "--model", str(model_path),
            "--drop-below", "0.9", "--out", str(terms_path),
        )
        assert code == 0
        assert "notice" in err
        refined = load_termset(terms_path)
        assert len(refined) == 11  # order-2 truncation over 4 variables
        diff = json.loads(out)
        assert diff["added"] == [] and diff["removed"] == []

    def test_expand_needs_theta(self, friedman2_model, tmp_path, capsys):
        model_path, _ = friedman2_model
        code, _, err = run_cli(
            capsys, "refine", "--model", str(model_path), "--expand", "3",
            "--out", str(tmp_path / "t.json"),
        )
        assert code == 2
        assert "--theta" in err

    def test_drop_below_keeps_friedman1_informative_variables(self, tmp_path, capsys):
        model_path = tmp_path / "model.json"
        run_cli(
            capsys,
            "fit", "--friedman", "1", "--ds", "2", "--bandwidths", "4,2",
            "--lambda", "3", "--seed", "0", "--out", str(model_path),
        )
        terms_path = tmp_path / "terms.json"
        code, _, _ = run_cli(
            capsys, "refine", "--model", str(model_path),
            "--drop-below", "0.02", "--out", str(terms_path),
        )
        assert code == 0
        reduced = load_termset(terms_path)
        assert reduced.variables() == (1, 2, 3, 4, 5)
        assert len(reduced) == 16

    def test_zero_variance_model_exits_4(self, tmp_path, capsys):
        model_obj = {
            "basis": "cos",
            "dimension": 2,
            "superposition_threshold": 1,
            "terms": [[], [1], [2]],
            "bandwidths": {"1": 2},
            "lambda": 0.0,
            "coefficients": [5.0, 0.0, 0.0],
            "real_output": True,
        }
        path = tmp_path / "model.json"
        path.write_text(json.dumps(model_obj))
        code, _, err = run_cli(capsys, "rank", "--model", str(path))
        assert code == 4
        assert "variance" in err


class TestPredict:
    def test_predictions_with_metrics(self, friedman2_model, tmp_path, capsys):
        model_path, _ = friedman2_model
        rng = np.random.default_rng(5)
        rows = ["x1,x2,x3,x4,y"]
        for x in rng.uniform(size=(20, 4)):
            rows.append(",".join(f"{v:.6f}" for v in x) + ",1.0")
        csv_path = tmp_path / "new.csv"
        csv_path.write_text("\n".join(rows) + "\n")
        code, out, _ = run_cli(
            capsys, "predict", "--model", str(model_path),
            "--csv", str(csv_path), "--target", "y",
        )
        assert code == 0
        payload = json.loads(out)
        assert len(payload["predictions"]) == 20
        assert "mse" in payload["metrics"]

    def test_normalization_stats_travel_with_the_model(self, tmp_path, capsys):
        # raw features live in [5, 10]; the model records the training
        # extrema and predict re-applies them to raw inputs
        rng = np.random.default_rng(3)
        rows = ["a,b,y"]
        for x, z in rng.uniform(5.0, 10.0, size=(40, 2)):
            rows.append(f"{x:.6f},{z:.6f},{x - z:.6f}")
        csv_path = tmp_path / "raw.csv"
        csv_path.write_text("\n".join(rows) + "\n")
        model_path = tmp_path / "model.json"
        code, _, _ = run_cli(
            capsys,
            "fit", "--csv", str(csv_path), "--target", "y", "--ds", "1",
            "--bandwidths", "4", "--split", "0.8", "--normalize",
            "--out", str(model_path),
        )
        assert code == 0
        assert "normalization" in read_json(model_path)
        code, out, _ = run_cli(
            capsys, "predict", "--model", str(model_path),
            "--csv", str(csv_path), "--target", "y",
        )
        assert code == 0
        payload = json.loads(out)
        assert len(payload["predictions"]) == 40
        assert payload["metrics"]["rmse"] < 1.0

    def test_predictions_without_target(self, friedman2_model, tmp_path, capsys):
        model_path, _ = friedman2_model
        csv_path = tmp_path / "new.csv"
        csv_path.write_text("x1,x2,x3,x4\n0.1,0.2,0.3,0.4\n")
        code, out, _ = run_cli(
            capsys, "predict", "--model", str(model_path), "--csv", str(csv_path)
        )
        assert code == 0
        payload = json.loads(out)
        assert len(payload["predictions"]) == 1
        assert "metrics" not in payload


class TestPlots:
    def test_svg_outputs_deterministic(self, friedman2_model, tmp_path, capsys):
        model_path, _ = friedman2_model
        a = tmp_path / "rank_a.svg"
        b = tmp_path / "rank_b.svg"
        g = tmp_path / "gsi.svg"
        run_cli(capsys, "rank", "--model", str(model_path),
                "--out", str(tmp_path / "r1.json"),
                "--plot-ranking", str(a), "--plot-gsi", str(g))
        run_cli(capsys, "rank", "--model", str(model_path),
                "--out", str(tmp_path / "r2.json"),
                "--plot-ranking", str(b))
        assert a.read_bytes() == b.read_bytes()
        assert g.read_text().startswith("<svg")


class TestBench:
    def test_bench_friedman_smoke(self, tmp_path, capsys):
        out_path = tmp_path / "bench.json"
        code, _, err = run_cli(
            capsys, "bench-friedman", "2", "--reps", "3", "--seed", "0",
            "--out", str(out_path),
        )
        assert code == 0
        result = read_json(out_path)
        assert result["repetitions"] == 3
        assert result["reference_median_mse"] == 17.21e3
        assert set(result["reference_baselines"]) == {"svm", "lm", "mnet", "rForst"}
        assert "median MSE" in err

    def test_bench_real_on_synthetic_table(self, tmp_path, capsys):
        rng = np.random.default_rng(12)
        rows = ["a,b,c,y"]
        for x in rng.uniform(size=(120, 3)):
            y = 2.0 * x[0] + np.sin(3 * x[1]) + 0.1 * rng.standard_normal()
            rows.append(",".join(f"{v:.6f}" for v in x) + f",{y:.6f}")
        csv_path = tmp_path / "table.csv"
        csv_path.write_text("\n".join(rows) + "\n")
        code, out, _ = run_cli(
            capsys,
            "bench-real", "custom", "--csv", str(csv_path), "--target", "y",
            "--split", "0.7", "--ds", "2", "--bandwidths", "4,2",
            "--gsi-threshold", "0.001", "--reps", "5", "--seed", "0",
        )
        assert code == 0
        summary = json.loads(out)
        assert summary["repetitions"] == 5
        assert summary["metric"] == "rmse"
        assert summary["median"] < 0.5

    def test_bench_real_without_data_dir_exits_3(self, capsys, monkeypatch):
        monkeypatch.delenv("ANOVA_DATA_DIR", raising=False)
        code, _, err = run_cli(capsys, "bench-real", "asn", "--reps", "2")
        assert code == 3
        assert "ANOVA_DATA_DIR" in err


class TestParser:
    def test_no_subcommand_prints_help(self, capsys):
        code, _, err = run_cli(capsys)
        assert code == 2
        assert "usage" in err

    def test_unknown_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["fit", "--bogus"])
        assert exc.value.code == 2

    def test_bad_basis_token_rejected_by_parser(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["fit", "--friedman", "1", "--basis", "wavelet"])
        assert exc.value.code == 2
