from typing import Sequence

import numpy as np

from ..imgio import Volume3D, load_volume
from ..errors import DimsMismatch, SizeMismatch
from .eigen import eigendecompose_batch
from .. import NG_config

__all__ = [
    "COEFFICIENTS",
    "Diffusion_Tensor",
    "Eigen_System",
    "Tensor_Field",
    "eigendecompose",
    "load_tensor_field",
]

COEFFICIENTS = ("dxx", "dyy", "dzz", "dxy", "dxz", "dyz")


class Diffusion_Tensor(object):
    """Symmetric 3x3 diffusion tensor from its six unique coefficients."""

    def __init__(self, dxx, dyy, dzz, dxy, dxz, dyz) -> None:
        self.coefficients = tuple(float(v) for v in (dxx, dyy, dzz, dxy, dxz, dyz))

    @classmethod
    def from_matrix(cls, matrix) -> "Diffusion_Tensor":
        m = np.asarray(matrix, dtype=np.float64)
        return cls(m[0, 0], m[1, 1], m[2, 2], m[0, 1], m[0, 2], m[1, 2])

    @property
    def matrix(self) -> np.ndarray:
        dxx, dyy, dzz, dxy, dxz, dyz = self.coefficients
        return np.array([[dxx, dxy, dxz], [dxy, dyy, dyz], [dxz, dyz, dzz]])

    @property
    def is_positive_definite(self) -> bool:
        return bool(eigendecompose(self).lambdas[2] > 0)


class Eigen_System(object):
    """Eigenvalues sorted lambda1 >= lambda2 >= lambda3 and the matching
    unit eigenvectors, ``vectors[i]`` belonging to ``lambdas[i]``.

    """

    def __init__(self, lambdas, vectors) -> None:
        self.lambdas = np.asarray(lambdas, dtype=np.float64)
        self.vectors = np.asarray(vectors, dtype=np.float64)

    @property
    def principal(self) -> np.ndarray:
        return self.vectors[0]

    def reconstruct(self) -> np.ndarray:
        """sum_i lambda_i v_i v_i^T"""
        return np.einsum("i,ij,ik->jk", self.lambdas, self.vectors, self.vectors)


def eigendecompose(D) -> Eigen_System:
    """Sorted eigensystem of one tensor.

    Accepts a Diffusion_Tensor or a symmetric 3x3 matrix. Each
    eigenvector has its first component above 1e-12 in magnitude
    positive; repeated eigenvalues get the eigenspace basis closest to
    the canonical axes. The sign rule wins over handedness, so the frame
    is not always right-handed.

    """
    matrix = D.matrix if isinstance(D, Diffusion_Tensor) else np.asarray(D, dtype=np.float64)
    lambdas, vectors = eigendecompose_batch(matrix[None])
    return Eigen_System(lambdas[0], vectors[0])


class Tensor_Field(object):
    """Voxelwise diffusion tensors held as six scalar volumes in the order
    dxx, dyy, dzz, dxy, dxz, dyz.

    """

    def __init__(self, volumes: Sequence[Volume3D]) -> None:
        if len(volumes) != 6:
            raise SizeMismatch(f"a tensor field needs six coefficient volumes, got {len(volumes)}")
        first = volumes[0]
        for name, vol in zip(COEFFICIENTS, volumes):
            if vol.shape3d != first.shape3d:
                raise DimsMismatch(f"{name} volume has dims {vol.shape3d}, dxx has {first.shape3d}")
            if vol.voxel_size != first.voxel_size:
                raise DimsMismatch(f"{name} volume voxel size differs from dxx")
        self.volumes = list(volumes)
        self._eigen = None

    @classmethod
    def from_arrays(cls, arrays, voxel_size=(1.0, 1.0, 1.0)) -> "Tensor_Field":
        return cls(
            [Volume3D.from_array(np.asarray(a, dtype=np.float64), voxel_size=voxel_size) for a in arrays]
        )

    @property
    def dims(self):
        return self.volumes[0].shape3d

    @property
    def voxel_size(self):
        return self.volumes[0].voxel_size

    def matrices(self) -> np.ndarray:
        """(N, 3, 3) tensors in flat voxel order, x varying fastest."""
        dxx, dyy, dzz, dxy, dxz, dyz = (
            np.asarray(v.array3d, dtype=np.float64).ravel(order="F") for v in self.volumes
        )
        return np.stack(
            [
                np.stack([dxx, dxy, dxz], axis=1),
                np.stack([dxy, dyy, dyz], axis=1),
                np.stack([dxz, dyz, dzz], axis=1),
            ],
            axis=1,
        )

    def eigen(self):
        """Cached voxelwise (lambdas (N, 3), vectors (N, 3, 3))."""
        if self._eigen is None:
            self._eigen = eigendecompose_batch(self.matrices())
            negative = self.negative_count
            if negative > 0:
                NG_config.ng_logger.warning(
                    f"{negative} voxels have a negative eigenvalue (not positive definite)"
                )
        return self._eigen

    @property
    def negative_count(self) -> int:
        lambdas, _ = self.eigen()
        return int(np.sum(lambdas[:, 2] < 0))

    def zero_voxels(self) -> np.ndarray:
        return np.all(self.matrices() == 0, axis=(1, 2))

    def to_volume(self, flat_values, **kwargs) -> Volume3D:
        """Float32 NIfTI-1 volume on this field's grid from flat voxel values."""
        grid = np.asarray(flat_values, dtype=np.float32).reshape(self.dims, order="F")
        return Volume3D.from_array(
            grid, voxel_size=self.voxel_size, datatype="float32", format="Nifti1", **kwargs
        )


def load_tensor_field(paths: Sequence[str]) -> Tensor_Field:
    """Tensor field from six volume files given in dxx, dyy, dzz, dxy, dxz, dyz order."""
    if len(paths) != 6:
        raise SizeMismatch(f"expected six tensor coefficient files, got {len(paths)}")
    field = Tensor_Field([load_volume(p) for p in paths])
    NG_config.ng_logger.info(f"tensor field {field.dims}")
    return field
