import json

import numpy as np
import pytest

from scalemds.cli import cli_main
from scalemds.dataio import read_csv_matrix, read_manifest, write_csv_matrix
from scalemds.rng import normal_matrix, spawned_generator


@pytest.fixture()
def collinear_csv(tmp_path):
    path = tmp_path / "tiny.csv"
    path.write_text("0\n1\n3\n")
    return path


@pytest.fixture()
def gaussian_csv(tmp_path):
    data = normal_matrix(spawned_generator(31), 3000, 6)
    data[:, :3] *= np.sqrt(15.0)
    path = tmp_path / "data.csv"
    write_csv_matrix(data, path)
    return path


class TestPlanCommand:
    def test_fast_plan_paper_point(self, capsys):
        code = cli_main(["plan", "--algorithm", "fast",
                         "--n", "1000000", "--l", "700", "--s", "20"])
        out = capsys.readouterr().out
        assert code == 0
        assert "leaf_count=42875" in out
        assert "mean_leaf_size=23.32" in out

    def test_divide_plan_summary(self, capsys):
        code = cli_main(["plan", "--algorithm", "divide",
                         "--n", "1000", "--l", "400", "--c", "20"])
        out = capsys.readouterr().out
        assert code == 0
        assert "p=3" in out

    def test_interpolate_plan_summary(self, capsys):
        code = cli_main(["plan", "--algorithm", "interpolate",
                         "--n", "10", "--l", "4"])
        out = capsys.readouterr().out
        assert code == 0
        assert "p=3" in out


class TestMdsCommand:
    def test_classical_collinear_fixture(self, collinear_csv, tmp_path, capsys):
        out_config = tmp_path / "config.csv"
        code = cli_main(["mds", "--algorithm", "classical",
                         "--input", str(collinear_csv), "--r", "1",
                         "--out-config", str(out_config)])
        assert code == 0
        column = read_csv_matrix(out_config)[:, 0]
        expected = np.array([-4.0, -1.0, 5.0]) / 3.0
        err = min(np.abs(column - expected).max(), np.abs(column + expected).max())
        assert err <= 1e-12
        assert "G1=1.000000" in capsys.readouterr().out

    def test_missing_r_is_usage_error(self, collinear_csv, capsys):
        code = cli_main(["mds", "--algorithm", "classical",
                         "--input", str(collinear_csv)])
        assert code == 1
        assert "usage" in capsys.readouterr().err

    def test_missing_input_file_is_data_error(self, tmp_path):
        code = cli_main(["mds", "--algorithm", "classical",
                         "--input", str(tmp_path / "nope.csv"), "--r", "1"])
        assert code == 2

    def test_ragged_csv_is_data_error(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("1,2\n3\n")
        code = cli_main(["mds", "--algorithm", "classical",
                         "--input", str(path), "--r", "1"])
        assert code == 2

    def test_r_too_large_is_usage_error(self, collinear_csv):
        code = cli_main(["mds", "--algorithm", "classical",
                         "--input", str(collinear_csv), "--r", "5"])
        assert code == 1

    def test_manifest_written(self, gaussian_csv, tmp_path):
        out_config = tmp_path / "config.csv"
        out_manifest = tmp_path / "run.json"
        code = cli_main(["mds", "--algorithm", "interpolate",
                         "--input", str(gaussian_csv), "--r", "3",
                         "--l", "500", "--seed", "11",
                         "--out-config", str(out_config),
                         "--out-manifest", str(out_manifest)])
        assert code == 0
        manifest = read_manifest(out_manifest)
        assert manifest["algorithm"] == "interpolate"
        assert manifest["params"]["l"] == 500
        assert manifest["input_rows"] == 3000
        assert manifest["output_paths"]["configuration"] == str(out_config)
        # manifest records the same fit values a rerun produces
        from scalemds import AlgorithmParams, interpolation_mds
        rerun = interpolation_mds(read_csv_matrix(gaussian_csv),
                                  AlgorithmParams(r=3, l=500, seed=11))
        assert manifest["gof_g1"] == rerun.gof_g1
        assert manifest["eigenvalue_estimates"] == [float(v) for v in
                                                    rerun.eigenvalue_estimates]

    def test_thread_count_identical_output(self, gaussian_csv, tmp_path):
        outputs = []
        for threads, name in [("1", "a.csv"), ("8", "b.csv")]:
            out = tmp_path / name
            code = cli_main(["mds", "--algorithm", "divide",
                             "--input", str(gaussian_csv), "--r", "3",
                             "--l", "400", "--c", "6", "--seed", "2",
                             "--threads", threads, "--out-config", str(out)])
            assert code == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]

    def test_idx_input(self, tmp_path):
        import struct
        idx = tmp_path / "img.idx"
        pixels = np.arange(5 * 9, dtype=np.uint8).reshape(5, 9)
        idx.write_bytes(struct.pack(">IIII", 0x00000803, 5, 3, 3) + pixels.tobytes())
        out = tmp_path / "cfg.csv"
        code = cli_main(["mds", "--algorithm", "classical",
                         "--input", str(idx), "--input-format", "idx",
                         "--r", "1", "--out-config", str(out)])
        assert code == 0
        assert read_csv_matrix(out).shape == (5, 1)


class TestSweepCommand:
    def test_sweep_prints_h_star(self, tmp_path, capsys):
        rng = spawned_generator(77)
        data = normal_matrix(rng, 800, 5)
        data[:, 0] *= np.sqrt(95.0)
        path = tmp_path / "sweep.csv"
        write_csv_matrix(data, path)
        code = cli_main(["gof-sweep", "--algorithm", "classical",
                         "--input", str(path), "--target", "0.8"])
        assert code == 0
        assert "h_star=1" in capsys.readouterr().out

    def test_unreachable_target_exit_code(self, tmp_path):
        data = normal_matrix(spawned_generator(78), 2000, 6)
        path = tmp_path / "iso.csv"
        write_csv_matrix(data, path)
        code = cli_main(["gof-sweep", "--algorithm", "divide",
                         "--input", str(path), "--c", "3",
                         "--target", "0.99"])
        assert code == 1


class TestStudyCommand:
    def test_tiny_grid(self, tmp_path, capsys):
        grid = {
            "master_seed": 5,
            "replications": 2,
            "scenarios": [{"n": 300, "k": 4, "h": 2}],
            "algorithms": ["classical", "interpolate"],
            "params": {"interpolate": {"l": 150}},
        }
        grid_path = tmp_path / "grid.json"
        grid_path.write_text(json.dumps(grid))
        out_dir = tmp_path / "study"
        code = cli_main(["study", str(grid_path), str(out_dir)])
        assert code == 0
        out = capsys.readouterr().out
        assert "study written" in out
        assert (out_dir / "study.csv").exists()
        # 2 algorithms x 2 replications x 2 dimensions
        assert "(8 data rows)" in out

    def test_help_exits_zero(self):
        assert cli_main(["--help"]) == 0

    def test_unknown_command_usage(self, capsys):
        assert cli_main(["frobnicate"]) == 1
        assert "usage" in capsys.readouterr().err.lower()
