import struct

import numpy as np
import pytest

from scalemds import FormatError, InvalidInputError, JoinError, ParamError
from scalemds.classical import classical_mds_from_data
from scalemds.dataio import (
    RunManifest,
    pair_images_labels,
    read_csv_matrix,
    read_idx_images,
    read_idx_labels,
    read_manifest,
    write_configuration,
    write_csv_matrix,
    write_idx_images,
    write_idx_labels,
    write_manifest,
)


def image_fixture_bytes():
    # two 2x2 images with hand-picked pixel values
    header = struct.pack(">IIII", 0x00000803, 2, 2, 2)
    return header + bytes([0, 7, 255, 3, 10, 20, 30, 40])


class TestIdxImages:
    def test_hand_assembled_fixture(self, tmp_path):
        path = tmp_path / "img.idx"
        path.write_bytes(image_fixture_bytes())
        images = read_idx_images(path)
        assert images.count == 2
        assert images.height == 2 and images.width == 2
        matrix = images.to_data_matrix()
        assert matrix.shape == (2, 4)
        assert np.array_equal(matrix, [[0.0, 7.0, 255.0, 3.0],
                                       [10.0, 20.0, 30.0, 40.0]])

    def test_label_magic_rejected(self, tmp_path):
        path = tmp_path / "bad.idx"
        path.write_bytes(struct.pack(">IIII", 0x00000801, 2, 2, 2) + bytes(8))
        with pytest.raises(FormatError, match="magic"):
            read_idx_images(path)

    def test_truncated_payload_reports_counts(self, tmp_path):
        path = tmp_path / "short.idx"
        path.write_bytes(image_fixture_bytes()[:-3])
        with pytest.raises(FormatError, match="expected 24 bytes, got 21"):
            read_idx_images(path)

    def test_zero_images_accepted_mds_rejects(self, tmp_path):
        path = tmp_path / "empty.idx"
        path.write_bytes(struct.pack(">IIII", 0x00000803, 0, 28, 28))
        images = read_idx_images(path)
        assert images.count == 0
        matrix = images.to_data_matrix()
        with pytest.raises(ParamError):
            classical_mds_from_data(matrix, 1)

    def test_byte_exact_round_trip(self, tmp_path):
        src = tmp_path / "src.idx"
        out = tmp_path / "out.idx"
        src.write_bytes(image_fixture_bytes())
        write_idx_images(read_idx_images(src), out)
        assert out.read_bytes() == src.read_bytes()


class TestIdxLabels:
    def test_fixture_values(self, tmp_path):
        path = tmp_path / "labels.idx"
        path.write_bytes(struct.pack(">II", 0x00000801, 3) + bytes([0, 1, 61]))
        assert np.array_equal(read_idx_labels(path), [0, 1, 61])

    def test_join_mismatch(self, tmp_path):
        img_path = tmp_path / "img.idx"
        img_path.write_bytes(image_fixture_bytes())
        images = read_idx_images(img_path)
        with pytest.raises(JoinError):
            pair_images_labels(images, np.array([0, 1, 2]))

    def test_join_success(self, tmp_path):
        img_path = tmp_path / "img.idx"
        img_path.write_bytes(image_fixture_bytes())
        matrix, labels = pair_images_labels(read_idx_images(img_path), np.array([4, 9]))
        assert matrix.shape == (2, 4)
        assert np.array_equal(labels, [4, 9])

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty"
        path.write_bytes(b"")
        with pytest.raises(FormatError):
            read_idx_labels(path)

    def test_label_round_trip(self, tmp_path):
        path = tmp_path / "labels.idx"
        write_idx_labels(np.array([5, 0, 61], dtype=np.uint8), path)
        assert np.array_equal(read_idx_labels(path), [5, 0, 61])


class TestCsvMatrix:
    def test_basic_read(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2\n3,4\n")
        assert np.array_equal(read_csv_matrix(path), [[1.0, 2.0], [3.0, 4.0]])

    def test_ragged_row_reports_line(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("1,2\n3\n")
        with pytest.raises(FormatError, match="line 2"):
            read_csv_matrix(path)

    def test_bad_number_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,2\n3,x\n")
        with pytest.raises(FormatError, match="line 2"):
            read_csv_matrix(path)

    def test_header_skipped(self, tmp_path):
        path = tmp_path / "h.csv"
        path.write_text("a,b\n1,2\n")
        assert np.array_equal(read_csv_matrix(path, has_header=True), [[1.0, 2.0]])

    def test_empty_rejected(self, tmp_path):
        path = tmp_path / "e.csv"
        path.write_text("")
        with pytest.raises(FormatError):
            read_csv_matrix(path)

    def test_round_trip_exact(self, tmp_path):
        path = tmp_path / "round.csv"
        matrix = np.random.default_rng(0).standard_normal((1000, 10))
        write_csv_matrix(matrix, path)
        back = read_csv_matrix(path)
        assert np.abs(back - matrix).max() <= 1e-15
        assert np.array_equal(back, matrix)  # 17 digits round-trips exactly


class TestManifest:
    def test_write_and_read(self, tmp_path):
        data = np.random.default_rng(1).standard_normal((40, 4))
        input_path = tmp_path / "in.csv"
        write_csv_matrix(data, input_path)
        cfg = classical_mds_from_data(data, 2)
        config_path = tmp_path / "out.csv"
        write_configuration(cfg, config_path)
        manifest = RunManifest(
            algorithm="classical",
            params={"r": 2, "l": None, "c": None, "s": None, "seed": 0, "threads": None},
            input_path=str(input_path),
            input_rows=40,
            input_cols=4,
            output_paths={"configuration": str(config_path)},
            gof_g1=cfg.gof_g1,
            gof_g2=cfg.gof_g2,
            eigenvalue_estimates=[float(v) for v in cfg.eigenvalue_estimates],
            elapsed_s=0.012,
        )
        manifest_path = tmp_path / "manifest.json"
        write_manifest(manifest, manifest_path)
        loaded = read_manifest(manifest_path)
        assert loaded["algorithm"] == "classical"
        assert loaded["gof_g1"] == cfg.gof_g1
        assert loaded["params"]["r"] == 2
        # configuration file round-trips exactly
        assert np.array_equal(read_csv_matrix(config_path), cfg.points)

    def test_missing_referenced_path(self, tmp_path):
        manifest = RunManifest(
            algorithm="classical", params={}, input_path=str(tmp_path / "gone.csv"),
            input_rows=1, input_cols=1, output_paths={}, gof_g1=1.0, gof_g2=1.0,
            eigenvalue_estimates=[1.0], elapsed_s=0.0,
        )
        with pytest.raises(InvalidInputError, match="missing path"):
            write_manifest(manifest, tmp_path / "m.json")
