from typing import List

import numpy as np

from ..imgio import Volume3D
from ..fit import EM_Gaussian_Mixture
from ..errors import NotEnoughVoxels
from .. import NG_config

__all__ = ["Tissue_Posteriors", "gmm_segment"]


class Tissue_Posteriors(object):
    """Per-class membership probabilities of every voxel.

    Classes are ordered by increasing mean intensity. ``posteriors`` has
    shape (K, nx, ny, nz) and sums to one over the class axis at every
    voxel, background included.

    """

    def __init__(
        self,
        posteriors: np.ndarray,
        class_means,
        class_variances,
        class_weights,
        voxel_size=(1.0, 1.0, 1.0),
        foreground=None,
        loglike_history: List[float] = (),
        iterations: int = 0,
    ) -> None:
        self.posteriors = np.asarray(posteriors, dtype=np.float64)
        self.class_means = np.asarray(class_means, dtype=np.float64)
        self.class_variances = np.asarray(class_variances, dtype=np.float64)
        self.class_weights = np.asarray(class_weights, dtype=np.float64)
        self.voxel_size = tuple(voxel_size)
        self.foreground = foreground
        self.loglike_history = list(loglike_history)
        self.iterations = int(iterations)

    @property
    def class_count(self) -> int:
        return len(self.class_means)

    @property
    def dims(self):
        return self.posteriors.shape[1:]

    def flat(self, k: int) -> np.ndarray:
        return self.posteriors[k].ravel(order="F")

    def class_volume(self, k: int) -> Volume3D:
        """Posterior map of class ``k`` as a float32 NIfTI-1 volume."""
        return Volume3D.from_array(
            self.posteriors[k].astype(np.float32),
            voxel_size=self.voxel_size,
            datatype="float32",
            format="Nifti1",
        )

    def hard_labels(self) -> np.ndarray:
        """Most probable class per voxel, numbered 1..K."""
        return np.argmax(self.posteriors, axis=0).astype(np.int32) + 1

    def summary(self) -> dict:
        return {
            "classes": self.class_count,
            "means": [float(m) for m in self.class_means],
            "variances": [float(v) for v in self.class_variances],
            "weights": [float(w) for w in self.class_weights],
            "iterations": self.iterations,
        }


def gmm_segment(vol: Volume3D, K: int = 3, max_iters: int = 500, tol: float = 1e-8) -> Tissue_Posteriors:
    """Gaussian mixture segmentation of voxel intensities.

    The mixture is fitted by EM to the nonzero voxels only; zero voxels are
    treated as background and receive the posterior of the fitted mixture
    at their intensity.

    Parameters:
        vol: scalar volume
        K: number of tissue classes
        max_iters: maximum EM iterations
        tol: stop once the total log-likelihood changes by less than this

    Returns:
        Tissue_Posteriors
    """
    grid = np.asarray(vol.array3d, dtype=np.float64)
    foreground = grid != 0
    sample = grid[foreground]
    if sample.size == 0:
        raise NotEnoughVoxels("volume has no nonzero voxels")

    if K == 1:
        return Tissue_Posteriors(
            np.ones((1,) + grid.shape),
            [sample.mean()],
            [sample.var()],
            [1.0],
            voxel_size=vol.voxel_size,
            foreground=foreground,
        )

    em = EM_Gaussian_Mixture(sample, n_classes=K, max_iter=max_iters, tolerance=tol).fit()
    order = np.argsort(em.means.cpu().numpy())
    post = em.posteriors(grid.ravel()).cpu().numpy()
    post = post[:, order].T.reshape((K,) + grid.shape)

    result = Tissue_Posteriors(
        post,
        em.means.cpu().numpy()[order],
        em.variances.cpu().numpy()[order],
        em.weights.cpu().numpy()[order],
        voxel_size=vol.voxel_size,
        foreground=foreground,
        loglike_history=em.loss_history,
        iterations=em.iteration,
    )
    NG_config.ng_logger.info(
        f"segmented {sample.size} voxels into {K} classes, means {np.round(result.class_means, 3).tolist()}"
    )
    return result
