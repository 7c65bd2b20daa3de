from typing import Tuple

import numpy as np

from .tensor_object import Tensor_Field
from ..imgio import Volume3D
from ..errors import AllZero, NonFinite

__all__ = ["fa", "fa_values", "mean_diffusivity", "fa_map", "md_map", "principal_direction_map"]


def fa_values(lambdas) -> np.ndarray:
    """Fractional anisotropy of (..., 3) eigenvalue triples, 0 where all are zero.

    FA = sqrt(((l1 - l2)^2 + (l2 - l3)^2 + (l3 - l1)^2) / (2 (l1^2 + l2^2 + l3^2)))
    """
    lam = np.asarray(lambdas, dtype=np.float64)
    l1, l2, l3 = lam[..., 0], lam[..., 1], lam[..., 2]
    numerator = (l1 - l2) ** 2 + (l2 - l3) ** 2 + (l3 - l1) ** 2
    denominator = 2.0 * (l1**2 + l2**2 + l3**2)
    safe = np.where(denominator > 0, denominator, 1.0)
    return np.where(denominator > 0, np.sqrt(numerator / safe), 0.0)


def fa(lambdas) -> float:
    """Fractional anisotropy of one eigenvalue triple, in [0, 1] for
    non-negative eigenvalues. Negative eigenvalues go through the formula
    unchanged.

    """
    lam = np.asarray(lambdas, dtype=np.float64).reshape(3)
    if not np.all(np.isfinite(lam)):
        raise NonFinite(f"eigenvalues {lam} are not finite")
    if np.all(lam == 0):
        raise AllZero("fractional anisotropy is undefined for the zero tensor")
    return float(fa_values(lam))


def mean_diffusivity(lambdas) -> np.ndarray:
    return np.mean(np.asarray(lambdas, dtype=np.float64), axis=-1)


def fa_map(field: Tensor_Field) -> Volume3D:
    """Voxelwise FA as a float32 volume; zero tensors map to 0."""
    lambdas, _ = field.eigen()
    return field.to_volume(fa_values(lambdas), description="FA")


def md_map(field: Tensor_Field) -> Volume3D:
    lambdas, _ = field.eigen()
    return field.to_volume(mean_diffusivity(lambdas), description="MD")


def principal_direction_map(field: Tensor_Field) -> Tuple[Volume3D, Volume3D, Volume3D]:
    """x, y and z components of the principal eigenvector per voxel.
    Zero tensors get the zero vector.

    """
    _, vectors = field.eigen()
    principal = vectors[:, 0, :].copy()
    principal[field.zero_voxels()] = 0.0
    return tuple(
        field.to_volume(principal[:, axis], description=f"V1 {name}")
        for axis, name in enumerate("xyz")
    )
