import csv
import io
import os
from typing import Sequence

import numpy as np

from ..errors import LandmarkFormatError, SizeMismatch, LabelMismatch, StorageError
from ..utils.operations import atomic_write
from .. import NG_config

__all__ = [
    "Landmark_Set",
    "check_correspondence",
    "parse_landmarks",
    "format_landmarks",
    "read_landmarks",
    "write_landmarks",
]


class Landmark_Set(object):
    """Labelled 3D points of one subject, in mm. Labels are unique."""

    def __init__(self, points, labels: Sequence[str] = None, subject_id: str = "") -> None:
        points = np.array(points, dtype=np.float64).reshape(-1, 3)
        if labels is None:
            labels = [f"L{i}" for i in range(len(points))]
        labels = [str(l) for l in labels]
        if len(labels) != len(points):
            raise SizeMismatch(f"{len(labels)} labels for {len(points)} points")
        if len(set(labels)) != len(labels):
            raise LandmarkFormatError("landmark labels must be unique")
        points.flags.writeable = False
        self._points = points
        self.labels = labels
        self.subject_id = subject_id

    @property
    def points(self) -> np.ndarray:
        return self._points

    def __len__(self):
        return len(self._points)

    def with_points(self, points) -> "Landmark_Set":
        return self.__class__(points, self.labels, self.subject_id)


def check_correspondence(P: Landmark_Set, Q: Landmark_Set) -> None:
    if len(P) != len(Q):
        raise SizeMismatch(f"landmark counts differ: {len(P)} and {len(Q)}")
    if P.labels != Q.labels:
        raise LabelMismatch("landmark labels do not match in order")


def parse_landmarks(text: str, subject_id: str = "") -> Landmark_Set:
    """Landmarks from CSV text with header ``label,x,y,z``."""
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows or [c.strip().lower() for c in rows[0]] != ["label", "x", "y", "z"]:
        raise LandmarkFormatError("landmark file must start with the header label,x,y,z", index=1)
    labels, points = [], []
    for n, row in enumerate(rows[1:], start=2):
        if len(row) != 4:
            raise LandmarkFormatError(f"expected 4 columns, got {len(row)}", index=n)
        try:
            points.append([float(c) for c in row[1:]])
        except ValueError as e:
            raise LandmarkFormatError(f"non-numeric coordinate: {e}", index=n) from e
        labels.append(row[0].strip())
    return Landmark_Set(points, labels, subject_id)


def read_landmarks(path: str) -> Landmark_Set:
    try:
        with open(path, "r", newline="") as f:
            text = f.read()
    except OSError as e:
        raise StorageError(f"could not read {path}: {e}") from e
    landmarks = parse_landmarks(text, os.path.splitext(os.path.basename(path))[0])
    NG_config.ng_logger.info(f"loaded {len(landmarks)} landmarks from {path}")
    return landmarks


def format_landmarks(landmarks: Landmark_Set) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["label", "x", "y", "z"])
    for label, p in zip(landmarks.labels, landmarks.points):
        writer.writerow([label] + ["%.17g" % c for c in p])
    return out.getvalue()


def write_landmarks(landmarks: Landmark_Set, path: str) -> str:
    return atomic_write(path, format_landmarks(landmarks))
