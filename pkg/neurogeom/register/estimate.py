from typing import Tuple, Union

import numpy as np

from .landmark_object import Landmark_Set, check_correspondence
from .transform_object import Affine_Transform
from ..mesh import Tri_Mesh
from ..errors import RankDeficient, DegenerateConfiguration, SingularTransform, SizeMismatch
from .. import NG_config

__all__ = [
    "estimate_affine",
    "estimate_rigid",
    "invert_affine",
    "apply_affine",
    "registration_residual",
]

MAX_CONDITION = 1e12


def _as_points(x) -> np.ndarray:
    if isinstance(x, Landmark_Set):
        return x.points
    return np.asarray(x, dtype=np.float64).reshape(-1, 3)


def estimate_affine(P: Landmark_Set, Q: Landmark_Set) -> Affine_Transform:
    """Least-squares affine map taking landmarks P onto Q.

    Minimizes sum_i |q_i - (R p_i + c)|^2 by a least-squares solve of the
    k x 4 system built from the points with a column of ones appended,
    which is the normal-equation solution Q P^T (P P^T)^-1 without forming
    the inverse. The landmarks must span 3D: the normal matrix of the
    centred and scaled points must have condition number at most 1e12.

    """
    check_correspondence(P, Q)
    k = len(P)
    if k < 4:
        raise RankDeficient("rank-deficient landmarks")

    p = P.points
    centred = p - p.mean(axis=0)
    scale = np.sqrt(np.mean(np.sum(centred**2, axis=1)))
    normalized = np.hstack([centred / scale if scale > 0 else centred, np.ones((k, 1))])
    condition = np.linalg.cond(normalized.T @ normalized)
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        NG_config.ng_logger.debug(f"landmark normal matrix condition number {condition:.3g}")
        raise RankDeficient("rank-deficient landmarks")

    augmented = np.hstack([p, np.ones((k, 1))])
    solution, _, rank, _ = np.linalg.lstsq(augmented, Q.points, rcond=None)
    if rank < 4:
        raise RankDeficient("rank-deficient landmarks")
    A = Affine_Transform(solution.T)
    NG_config.ng_logger.info(f"affine fit over {k} landmarks, det R = {A.det:.6g}")
    return A


def estimate_rigid(P: Landmark_Set, Q: Landmark_Set) -> Affine_Transform:
    """Least-squares rotation plus translation taking P onto Q.

    The rotation is the orthogonal factor of the SVD of the centred cross
    covariance, with the sign of the smallest singular direction flipped
    when needed so that det R = +1.

    """
    check_correspondence(P, Q)
    if len(P) < 3:
        raise DegenerateConfiguration("rigid alignment needs at least 3 landmarks")
    p_bar = P.points.mean(axis=0)
    q_bar = Q.points.mean(axis=0)
    Pc = P.points - p_bar
    Qc = Q.points - q_bar

    spread = np.linalg.svd(Pc, compute_uv=False)
    if spread[0] == 0 or spread[1] <= 1e-10 * spread[0]:
        raise DegenerateConfiguration("landmarks are collinear after centring")

    H = Pc.T @ Qc
    U, _, Vt = np.linalg.svd(H)
    V = Vt.T
    d = 1.0 if np.linalg.det(V @ U.T) >= 0 else -1.0
    R = V @ np.diag([1.0, 1.0, d]) @ U.T
    c = q_bar - R @ p_bar
    A = Affine_Transform.from_parts(R, c)
    NG_config.ng_logger.info(f"rigid fit over {len(P)} landmarks")
    return A


def invert_affine(A: Affine_Transform) -> Affine_Transform:
    """Inverse map p = R^-1 q - R^-1 c."""
    if not A.is_invertible:
        raise SingularTransform(f"transform is singular, det R = {A.det:.3g}")
    R_inv = np.linalg.inv(A.R)
    return Affine_Transform.from_parts(R_inv, -R_inv @ A.c)


def apply_affine(A: Affine_Transform, x: Union[np.ndarray, Landmark_Set, Tri_Mesh]):
    """Transform points, a landmark set or a mesh.

    Mesh connectivity is kept; a reflecting transform (det R < 0) also
    flips the face winding so faces keep pointing outward.

    """
    if isinstance(x, Tri_Mesh):
        mesh = x.copy(vertices=A.transform_points(x.vertices))
        return mesh.flipped() if A.det < 0 else mesh
    if isinstance(x, Landmark_Set):
        return x.with_points(A.transform_points(x.points))
    return A.transform_points(x)


def registration_residual(A: Affine_Transform, P, Q) -> Tuple[float, np.ndarray]:
    """Per-landmark distances |q_i - (R p_i + c)| and their root mean square."""
    p = _as_points(P)
    q = _as_points(Q)
    if len(p) != len(q):
        raise SizeMismatch(f"landmark counts differ: {len(p)} and {len(q)}")
    per_landmark = np.linalg.norm(q - A.transform_points(p), axis=1)
    rms = float(np.sqrt(np.mean(per_landmark**2))) if len(per_landmark) else 0.0
    return rms, per_landmark
