import math

import numpy as np
import torch

from .base import BaseOptimizer
from ..errors import DegenerateClass, NotEnoughVoxels
from .. import NG_config

__all__ = ["EM_Gaussian_Mixture"]


class EM_Gaussian_Mixture(BaseOptimizer):
    """Expectation-maximization fit of a one dimensional Gaussian mixture.

    Initialization is deterministic: class means at the (k + 0.5)/K
    quantiles of the sample, one pooled within-class variance and uniform
    weights. ``loss_history`` records the total log-likelihood of the sample
    at the start of every iteration; EM never lets it decrease.

    Parameters:
        data: intensities to fit [array]
        n_classes: number of mixture components K [int]
        max_iter: maximum number of EM iterations [int]
        tolerance: stop once the log-likelihood changes by less than this [float]
        variance_floor: a class variance below this counts as collapsed; defaults to 1e-6 times the squared data range [float]

    """

    def __init__(
        self,
        data,
        n_classes: int = 3,
        max_iter: int = 500,
        tolerance: float = 1e-8,
        variance_floor: float = None,
        **kwargs,
    ) -> None:
        super().__init__(data, max_iter=max_iter, tolerance=tolerance, **kwargs)
        self.n_classes = int(n_classes)
        if self.n_classes < 1:
            raise NotEnoughVoxels(f"need at least one class, got {self.n_classes}")
        distinct = torch.unique(self.data).numel()
        if distinct < self.n_classes:
            raise NotEnoughVoxels(
                f"{distinct} distinct intensities cannot support {self.n_classes} classes"
            )
        span = float(self.data.max() - self.data.min())
        self.variance_floor = 1e-6 * span**2 if variance_floor is None else variance_floor
        self.initialize()

    def initialize(self) -> None:
        K = self.n_classes
        q = torch.tensor(
            [(k + 0.5) / K for k in range(K)], dtype=NG_config.ng_dtype, device=NG_config.ng_device
        )
        self.means = torch.quantile(self.data, q)
        nearest = torch.argmin(torch.abs(self.data[:, None] - self.means[None, :]), dim=1)
        pooled = torch.mean((self.data - self.means[nearest]) ** 2)
        if pooled <= self.variance_floor:
            pooled = torch.var(self.data)
        self.variances = pooled.repeat(K)
        self.weights = torch.full_like(self.means, 1.0 / K)

    def log_joint(self, x: torch.Tensor) -> torch.Tensor:
        """log(w_k N(x | mu_k, var_k)) for every sample and class, shape (N, K)."""
        return (
            torch.log(self.weights)[None, :]
            - 0.5 * torch.log(2 * math.pi * self.variances)[None, :]
            - (x[:, None] - self.means[None, :]) ** 2 / (2 * self.variances[None, :])
        )

    def posteriors(self, x=None) -> torch.Tensor:
        """Class responsibilities for ``x`` (default the fitted data)."""
        if x is None:
            x = self.data
        else:
            x = torch.as_tensor(x, dtype=NG_config.ng_dtype, device=NG_config.ng_device).reshape(-1)
        joint = self.log_joint(x)
        return torch.exp(joint - torch.logsumexp(joint, dim=1, keepdim=True))

    def step(self) -> float:
        """One E step followed by one M step; returns the log-likelihood of
        the parameters the step started from.

        """
        joint = self.log_joint(self.data)
        norm = torch.logsumexp(joint, dim=1, keepdim=True)
        loglike = float(torch.sum(norm))
        resp = torch.exp(joint - norm)

        counts = torch.sum(resp, dim=0)
        if torch.any(counts <= 0):
            raise DegenerateClass(f"a class lost all its samples at iteration {self.iteration}")
        means = torch.sum(resp * self.data[:, None], dim=0) / counts
        variances = torch.sum(resp * (self.data[:, None] - means[None, :]) ** 2, dim=0) / counts
        if torch.any(~torch.isfinite(variances)) or torch.any(variances < self.variance_floor):
            raise DegenerateClass(
                f"class variance collapsed below {self.variance_floor:.3g} at iteration {self.iteration}"
            )
        self.means = means
        self.variances = variances
        self.weights = counts / torch.sum(counts)
        return loglike

    def fit(self) -> "EM_Gaussian_Mixture":
        while self.iteration < self.max_iter:
            self.loss_history.append(self.step())
            self.iteration += 1
            if self.verbose > 0:
                NG_config.ng_logger.info(
                    f"EM iteration {self.iteration}: log-likelihood {self.loss_history[-1]:.10g}"
                )
            if self.converged():
                self.message = self.message + "success"
                break
        else:
            self.message = self.message + "fail. max iteration reached"
        # log-likelihood of the final parameters
        joint = self.log_joint(self.data)
        self.loss_history.append(float(torch.sum(torch.logsumexp(joint, dim=1))))

        drops = np.diff(self.loss_history)
        # rounding of the sum grows with the sample size
        slack = 1e-12 * max(len(self.data), abs(self.loss_history[-1]))
        if np.any(drops < -slack):
            NG_config.ng_logger.warning(
                f"log-likelihood decreased by {-drops.min():.3g} during EM"
            )
        NG_config.ng_logger.info(
            f"EM {self.message} after {self.iteration} iterations, log-likelihood {self.loss_history[-1]:.10g}"
        )
        return self
