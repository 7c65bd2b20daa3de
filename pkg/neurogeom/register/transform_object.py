import numpy as np

from ..errors import ParseError, StorageError
from ..utils.operations import atomic_write
from .. import NG_config

__all__ = ["Affine_Transform", "format_matrix", "parse_matrix", "read_matrix", "write_matrix"]


class Affine_Transform(object):
    """Map q = R p + c held as a 4x4 matrix acting on homogeneous points.

    The last row is always exactly (0, 0, 0, 1).

    """

    def __init__(self, matrix=None) -> None:
        if matrix is None:
            matrix = np.eye(4)
        matrix = np.array(matrix, dtype=np.float64)
        if matrix.shape == (3, 4):
            matrix = np.vstack([matrix, [0.0, 0.0, 0.0, 1.0]])
        if matrix.shape != (4, 4):
            raise ValueError(f"an affine matrix is 4x4 or 3x4, got {matrix.shape}")
        if not np.array_equal(matrix[3], [0.0, 0.0, 0.0, 1.0]):
            raise ValueError(f"last row of an affine matrix must be (0, 0, 0, 1), got {matrix[3]}")
        matrix.flags.writeable = False
        self._matrix = matrix

    @classmethod
    def from_parts(cls, R, c) -> "Affine_Transform":
        matrix = np.eye(4)
        matrix[:3, :3] = R
        matrix[:3, 3] = c
        return cls(matrix)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def R(self) -> np.ndarray:
        return self._matrix[:3, :3]

    @property
    def c(self) -> np.ndarray:
        return self._matrix[:3, 3]

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.R))

    @property
    def is_invertible(self) -> bool:
        return abs(self.det) > 1e-12

    def is_rigid(self, tol: float = 1e-10) -> bool:
        """R is a proper rotation within ``tol``."""
        return bool(
            np.max(np.abs(self.R.T @ self.R - np.eye(3))) < tol and abs(self.det - 1.0) < tol
        )

    def transform_points(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        return points @ self.R.T + self.c

    def compose(self, other: "Affine_Transform") -> "Affine_Transform":
        """self after other."""
        return Affine_Transform(self._matrix @ other.matrix)

    def __matmul__(self, other):
        if not isinstance(other, Affine_Transform):
            return NotImplemented
        return self.compose(other)

    def __eq__(self, other):
        if not isinstance(other, Affine_Transform):
            return NotImplemented
        return np.array_equal(self._matrix, other._matrix)

    def __str__(self):
        return format_matrix(self)


def format_matrix(A: Affine_Transform) -> str:
    return "".join(" ".join("%.17g" % v for v in row) + "\n" for row in A.matrix)


def parse_matrix(text: str) -> Affine_Transform:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if len(rows) not in (3, 4) or any(len(r) != 4 for r in rows):
        raise ParseError("an affine matrix file holds 3 or 4 rows of 4 numbers")
    try:
        values = [[float(v) for v in r] for r in rows]
    except ValueError as e:
        raise ParseError(f"non-numeric matrix entry: {e}") from e
    try:
        return Affine_Transform(values)
    except ValueError as e:
        raise ParseError(str(e)) from e


def write_matrix(A: Affine_Transform, path: str) -> str:
    """4x4 matrix, row major, 17 significant digits."""
    atomic_write(path, format_matrix(A))
    NG_config.ng_logger.info(f"saved {path}")
    return path


def read_matrix(path: str) -> Affine_Transform:
    try:
        with open(path, "r") as f:
            text = f.read()
    except OSError as e:
        raise StorageError(f"could not read {path}: {e}") from e
    return parse_matrix(text)
