import json

import numpy as np
import pytest

from multilca.cli import main
from multilca.harness import RESULTS_HEADER, SUMMARY_HEADER


@pytest.fixture
def dataset_dir(tmp_path):
    out = tmp_path / "ds"
    rc = main(
        [
            "simulate",
            "--n", "60", "--k", "2", "--l", "3", "--rho", "0.8",
            "--seed", "11", "--out", str(out),
        ]
    )
    assert rc == 0
    return out


class TestSimulate:
    def test_creates_dataset(self, dataset_dir):
        meta = json.loads((dataset_dir / "meta.json").read_text())
        assert meta["N"] == 60 and meta["J"] == 12 and meta["L"] == 3
        assert (dataset_dir / "labels.csv").exists()
        assert (dataset_dir / "theta_003.csv").exists()

    def test_indivisible_n_fails(self, tmp_path, capsys):
        rc = main(
            ["simulate", "--n", "7", "--k", "2", "--l", "1", "--rho", "0.5",
             "--seed", "1", "--out", str(tmp_path / "x")]
        )
        assert rc == 2
        assert "divisible" in capsys.readouterr().err


class TestFit:
    def test_writes_labels_and_thetas(self, dataset_dir, tmp_path):
        out = tmp_path / "fit"
        rc = main(
            ["fit", "--input", str(dataset_dir), "--method", "LCA-DSoG",
             "--k", "2", "--seed", "5", "--out", str(out)]
        )
        assert rc == 0
        labels = np.loadtxt(out / "labels.csv", dtype=int)
        assert labels.shape == (60,) and set(labels) == {1, 2}
        theta = np.loadtxt(out / "theta_001.csv", delimiter=",")
        assert theta.shape == (12, 2)

    def test_dump_aggregates_flag(self, dataset_dir, tmp_path):
        out = tmp_path / "fit"
        rc = main(
            ["fit", "--input", str(dataset_dir), "--method", "LCA-SoR",
             "--k", "2", "--seed", "5", "--out", str(out), "--dump-aggregates"]
        )
        assert rc == 0
        for name in ("r_sum.csv", "s_sum.csv", "s_sum_debiased.csv"):
            assert (out / name).exists()
        s_deb = np.loadtxt(out / "s_sum_debiased.csv", delimiter=",")
        assert np.all(np.diag(s_deb) == 0)


class TestScore:
    def test_prints_metric_row(self, dataset_dir, tmp_path, capsys):
        out = tmp_path / "fit"
        main(["fit", "--input", str(dataset_dir), "--method", "LCA-DSoG",
              "--k", "2", "--seed", "5", "--out", str(out)])
        rc = main(
            ["score", "--truth", str(dataset_dir / "labels.csv"),
             "--est", str(out / "labels.csv"),
             "--theta-true", str(dataset_dir), "--theta-est", str(out),
             "--header"]
        )
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "clustering_error,hamming_error,nmi,ari,rel_l2_error"
        values = lines[1].split(",")
        assert len(values) == 5
        assert all(v != "" for v in values)
        assert 0.0 <= float(values[1]) <= 1.0

    def test_without_theta_dirs(self, dataset_dir, capsys):
        rc = main(
            ["score", "--truth", str(dataset_dir / "labels.csv"),
             "--est", str(dataset_dir / "labels.csv")]
        )
        assert rc == 0
        row = capsys.readouterr().out.strip().split(",")
        assert row[0] == "0.0" and row[4] == ""


class TestSelectK:
    def test_writes_curve(self, dataset_dir, tmp_path):
        curve = tmp_path / "curve.csv"
        rc = main(
            ["select-k", "--input", str(dataset_dir), "--method", "LCA-DSoG",
             "--k-min", "1", "--k-max", "4", "--seed", "3", "--out", str(curve)]
        )
        assert rc == 0
        lines = curve.read_text().strip().splitlines()
        assert lines[0] == "k,Q,selected"
        rows = [line.split(",") for line in lines[1:]]
        assert [r[0] for r in rows] == ["1", "2", "3", "4"]
        assert sum(int(r[2]) for r in rows) == 1
        assert float(rows[0][1]) == 0.0  # Q at k=1


class TestExperimentAndSummarize:
    def test_end_to_end(self, tmp_path, capsys):
        cfg = {
            "experiment": "tiny-cli",
            "param_name": "N",
            "param_values": [20, 30],
            "fixed": {"K": 2, "M": 3, "L": 2, "rho": 0.6},
            "replications": 2,
            "master_seed": 9,
            "methods": ["LCA-SoR", "LCA-SoG"],
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        results = tmp_path / "results.csv"
        rc = main(["experiment", "--config", str(cfg_path), "--out", str(results), "--workers", "1"])
        assert rc == 0
        lines = results.read_text().splitlines()
        assert lines[0] == ",".join(RESULTS_HEADER)
        assert len(lines) == 1 + 2 * 2 * 2

        summary = tmp_path / "summary.csv"
        rc = main(["summarize", "--in", str(results), "--out", str(summary)])
        assert rc == 0
        s_lines = summary.read_text().splitlines()
        assert s_lines[0] == ",".join(SUMMARY_HEADER)
        assert len(s_lines) == 1 + 2 * 2  # (points x methods)

    def test_preset_requires_exclusive_flags(self, tmp_path, capsys):
        rc = main(["experiment", "--out", str(tmp_path / "r.csv")])
        assert rc == 2
        assert "exactly one" in capsys.readouterr().err

    def test_config_file_missing(self, tmp_path, capsys):
        rc = main(
            ["experiment", "--config", str(tmp_path / "nope.json"),
             "--out", str(tmp_path / "r.csv")]
        )
        assert rc == 2
