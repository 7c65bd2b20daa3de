from typing import Tuple

import numpy as np

from ..errors import NonFinite
from .. import NG_config

__all__ = ["eigendecompose_batch", "jacobi_eigen", "NEAR_DEGENERATE"]

# relative eigenvalue gap below which the closed form hands over to Jacobi
NEAR_DEGENERATE = 1e-8
# relative spread under which eigenvalues are treated as equal
EQUAL_EIGENVALUES = 1e-12
SIGN_TOLERANCE = 1e-12


def _closed_form_values(A: np.ndarray) -> np.ndarray:
    """Eigenvalues of symmetric 3x3 matrices, descending, from the
    trigonometric roots of the characteristic polynomial.

    """
    p1 = A[:, 0, 1] ** 2 + A[:, 0, 2] ** 2 + A[:, 1, 2] ** 2
    q = np.trace(A, axis1=1, axis2=2) / 3.0
    diag = np.diagonal(A, axis1=1, axis2=2) - q[:, None]
    p = np.sqrt((np.sum(diag**2, axis=1) + 2.0 * p1) / 6.0)
    safe = np.where(p > 0, p, 1.0)
    B = (A - q[:, None, None] * np.eye(3)) / safe[:, None, None]
    r = np.clip(np.linalg.det(B) / 2.0, -1.0, 1.0)
    phi = np.arccos(r) / 3.0
    l1 = q + 2.0 * p * np.cos(phi)
    l3 = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    l2 = 3.0 * q - l1 - l3
    return np.stack([l1, l2, l3], axis=1)


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _closed_form_vectors(A: np.ndarray, lambdas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvectors for well separated spectra.

    The eigenvalue farthest from the other two gives its eigenvector as
    the largest cross product of two rows of A - lambda I. The other two
    come from one exact rotation in the orthogonal complement, so the
    frame is orthonormal to rounding. Eigenvalues are then the Rayleigh
    quotients of the vectors.

    """
    n = len(A)
    idx = np.arange(n)
    isolated_first = (lambdas[:, 0] - lambdas[:, 1]) >= (lambdas[:, 1] - lambdas[:, 2])
    lam = np.where(isolated_first, lambdas[:, 0], lambdas[:, 2])
    M = A - lam[:, None, None] * np.eye(3)
    crosses = np.stack(
        [
            np.cross(M[:, 0], M[:, 1]),
            np.cross(M[:, 0], M[:, 2]),
            np.cross(M[:, 1], M[:, 2]),
        ],
        axis=1,
    )
    norms = np.linalg.norm(crosses, axis=2)
    best = np.argmax(norms, axis=1)
    v = crosses[idx, best] / norms[idx, best][:, None]

    axis = np.eye(3)[np.argmin(np.abs(v), axis=1)]
    u = _unit(np.cross(v, axis))
    w = np.cross(v, u)
    a = np.einsum("ni,nij,nj->n", u, A, u)
    b = np.einsum("ni,nij,nj->n", u, A, w)
    c = np.einsum("ni,nij,nj->n", w, A, w)
    theta = 0.5 * np.arctan2(2.0 * b, a - c)
    cos, sin = np.cos(theta)[:, None], np.sin(theta)[:, None]
    e1 = cos * u + sin * w
    e2 = cos * w - sin * u

    vectors = np.stack([v, e1, e2], axis=1)
    values = np.einsum("nij,njk,nik->ni", vectors, A, vectors)
    return values, vectors


def jacobi_eigen(A: np.ndarray, max_sweeps: int = 50) -> Tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigendecomposition of one symmetric 3x3 matrix.

    Returns the (unsorted) eigenvalues and the eigenvectors as rows.

    """
    a = np.array(A, dtype=np.float64)
    V = np.eye(3)
    scale = max(np.max(np.abs(a)), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2
        if off <= (np.finfo(float).eps * scale) ** 2:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            if a[p, q] == 0.0:
                continue
            theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
            t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            J = np.eye(3)
            J[p, p] = c
            J[q, q] = c
            J[p, q] = s
            J[q, p] = -s
            a = J.T @ a @ J
            V = V @ J
    return np.diag(a).copy(), V.T.copy()


def _canonical_degenerate(values: np.ndarray, vectors: np.ndarray, scale: float) -> np.ndarray:
    """Replace the basis of every repeated eigenvalue by the Gram-Schmidt
    orthonormalization of the canonical axes projected onto its eigenspace.
    ``values`` must be sorted descending.

    """
    vectors = vectors.copy()
    groups = [[0]]
    for i in (1, 2):
        if values[groups[-1][-1]] - values[i] <= EQUAL_EIGENVALUES * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    for group in groups:
        if len(group) < 2:
            continue
        if len(group) == 3:
            vectors[:] = np.eye(3)
            continue
        projector = vectors[group].T @ vectors[group]
        chosen = []
        for axis in np.eye(3):
            x = projector @ axis
            for y in chosen:
                x = x - np.dot(x, y) * y
            if np.linalg.norm(x) > 1e-6:
                chosen.append(x / np.linalg.norm(x))
            if len(chosen) == len(group):
                break
        vectors[group] = chosen
    return vectors


def _apply_sign_convention(vectors: np.ndarray) -> np.ndarray:
    """Flip each vector so its first component above 1e-12 in magnitude is positive."""
    significant = np.abs(vectors) > SIGN_TOLERANCE
    first = np.argmax(significant, axis=-1)
    lead = np.take_along_axis(vectors, first[..., None], axis=-1)
    return np.where(lead < 0, -vectors, vectors)


def eigendecompose_batch(matrices) -> Tuple[np.ndarray, np.ndarray]:
    """Eigensystems of many symmetric 3x3 matrices.

    Each eigenvector has its first component above 1e-12 in magnitude
    positive. The three vectors are therefore not forced into a
    right-handed frame; det(vectors[n]) may be -1, also for degenerate
    eigenvalues.

    Parameters:
        matrices: (N, 3, 3) symmetric matrices

    Returns:
        lambdas: (N, 3) eigenvalues, descending
        vectors: (N, 3, 3) with vectors[n, i] the unit eigenvector of lambdas[n, i]
    """
    A = np.asarray(matrices, dtype=np.float64).reshape(-1, 3, 3)
    if not np.all(np.isfinite(A)):
        raise NonFinite("tensor holds NaN or infinite coefficients")
    A = 0.5 * (A + np.transpose(A, (0, 2, 1)))

    lambdas = _closed_form_values(A)
    scale = np.max(np.abs(lambdas), axis=1)
    gap = np.minimum(lambdas[:, 0] - lambdas[:, 1], lambdas[:, 1] - lambdas[:, 2])
    near = gap <= NEAR_DEGENERATE * scale

    values = np.zeros_like(lambdas)
    vectors = np.zeros_like(A)
    regular = np.flatnonzero(~near)
    if len(regular) > 0:
        values[regular], vectors[regular] = _closed_form_vectors(A[regular], lambdas[regular])

    special = np.flatnonzero(near)
    if len(special) > 0:
        NG_config.ng_logger.debug(f"{len(special)} nearly degenerate tensors solved by Jacobi")
    for n in special:
        values[n], vectors[n] = jacobi_eigen(A[n])

    order = np.argsort(-values, axis=1, kind="stable")
    values = np.take_along_axis(values, order, axis=1)
    vectors = np.take_along_axis(vectors, order[:, :, None], axis=1)

    for n in special:
        vectors[n] = _canonical_degenerate(values[n], vectors[n], scale[n])
    return values, _apply_sign_convention(vectors)
