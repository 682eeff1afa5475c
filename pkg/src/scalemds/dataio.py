"""File ingestion and result serialization: IDX image/label files,
numeric CSV matrices, configuration output and run manifests.

IDX files are the big-endian format used by the MNIST-family image sets:
a 32-bit magic number, 32-bit dimension sizes, then raw unsigned bytes.
"""

from __future__ import annotations

import dataclasses
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classical import MdsConfiguration
from .errors import FormatError, InvalidInputError, JoinError

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801


@dataclass(frozen=True)
class IdxImageSet:
    """A stack of equally sized grayscale images, pixel values 0-255."""

    height: int
    width: int
    pixels: np.ndarray  # (count, height, width) uint8

    @property
    def count(self) -> int:
        return self.pixels.shape[0]

    def to_data_matrix(self) -> np.ndarray:
        """Flatten row-major into a (count, height*width) float matrix."""
        return self.pixels.reshape(self.count, self.height * self.width).astype(np.float64)


def read_idx_images(path) -> IdxImageSet:
    """Parse an IDX image file (magic 0x00000803)."""
    blob = Path(path).read_bytes()
    if len(blob) < 16:
        raise FormatError(f"{path}: file too short for an IDX image header ({len(blob)} bytes)")
    magic, count, height, width = struct.unpack(">IIII", blob[:16])
    if magic != IDX_IMAGES_MAGIC:
        raise FormatError(
            f"{path}: bad magic 0x{magic:08x}, expected 0x{IDX_IMAGES_MAGIC:08x} for images"
        )
    expected = 16 + count * height * width
    if len(blob) != expected:
        raise FormatError(
            f"{path}: payload size mismatch, expected {expected} bytes, got {len(blob)}"
        )
    pixels = np.frombuffer(blob, dtype=np.uint8, offset=16).reshape(count, height, width)
    return IdxImageSet(height=height, width=width, pixels=pixels)


def write_idx_images(images: IdxImageSet, path) -> None:
    """Serialize back to IDX bytes; inverse of read_idx_images."""
    header = struct.pack(
        ">IIII", IDX_IMAGES_MAGIC, images.count, images.height, images.width
    )
    Path(path).write_bytes(header + images.pixels.astype(np.uint8).tobytes())


def read_idx_labels(path) -> np.ndarray:
    """Parse an IDX label file (magic 0x00000801) into a uint8 vector."""
    blob = Path(path).read_bytes()
    if len(blob) < 8:
        raise FormatError(f"{path}: file too short for an IDX label header ({len(blob)} bytes)")
    magic, count = struct.unpack(">II", blob[:8])
    if magic != IDX_LABELS_MAGIC:
        raise FormatError(
            f"{path}: bad magic 0x{magic:08x}, expected 0x{IDX_LABELS_MAGIC:08x} for labels"
        )
    expected = 8 + count
    if len(blob) != expected:
        raise FormatError(
            f"{path}: payload size mismatch, expected {expected} bytes, got {len(blob)}"
        )
    return np.frombuffer(blob, dtype=np.uint8, offset=8).copy()


def write_idx_labels(labels, path) -> None:
    arr = np.asarray(labels, dtype=np.uint8)
    Path(path).write_bytes(struct.pack(">II", IDX_LABELS_MAGIC, arr.size) + arr.tobytes())


def pair_images_labels(images: IdxImageSet, labels) -> tuple[np.ndarray, np.ndarray]:
    """Join an image set with its label vector; lengths must agree."""
    arr = np.asarray(labels)
    if arr.shape[0] != images.count:
        raise JoinError(
            f"label count {arr.shape[0]} does not match image count {images.count}"
        )
    return images.to_data_matrix(), arr


def read_csv_matrix(path, has_header: bool = False) -> np.ndarray:
    """Read a rectangular numeric CSV into a float matrix.

    Ragged or non-numeric rows raise FormatError naming the line number
    (1-based, counting the header if present).
    """
    import csv as _csv

    rows: list[list[float]] = []
    width: int | None = None
    with open(path, newline="") as handle:
        reader = _csv.reader(handle)
        for line_no, record in enumerate(reader, start=1):
            if has_header and line_no == 1:
                continue
            if width is None:
                width = len(record)
            if len(record) != width:
                raise FormatError(
                    f"{path}: ragged row at line {line_no}: "
                    f"expected {width} fields, got {len(record)}"
                )
            try:
                rows.append([float(field) for field in record])
            except ValueError as exc:
                raise FormatError(f"{path}: invalid number at line {line_no}: {exc}") from exc
    if not rows or width == 0:
        raise FormatError(f"{path}: no data rows")
    return np.asarray(rows, dtype=np.float64)


def write_csv_matrix(matrix, path) -> None:
    """Write a matrix as headerless CSV with 17 significant digits.

    17 digits are enough to round-trip any float64 exactly.
    """
    arr = np.asarray(matrix, dtype=np.float64)
    np.savetxt(path, arr, fmt="%.17g", delimiter=",")


def write_configuration(config: MdsConfiguration, path) -> None:
    """Write the embedding coordinates of a configuration as CSV."""
    write_csv_matrix(config.points, path)


@dataclass(frozen=True)
class RunManifest:
    """A machine-readable record of one MDS run."""

    algorithm: str
    params: dict
    input_path: str
    input_rows: int
    input_cols: int
    output_paths: dict
    gof_g1: float
    gof_g2: float
    eigenvalue_estimates: list
    elapsed_s: float

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def write_manifest(manifest: RunManifest, path) -> None:
    """Write a manifest as JSON; all referenced paths must already exist."""
    referenced = [manifest.input_path, *manifest.output_paths.values()]
    for ref in referenced:
        if not Path(ref).exists():
            raise InvalidInputError(f"manifest references missing path: {ref}")
    with open(path, "w") as handle:
        json.dump(manifest.to_dict(), handle, indent=2)
        handle.write("\n")


def read_manifest(path) -> dict:
    with open(path) as handle:
        return json.load(handle)
