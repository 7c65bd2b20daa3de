from typing import Sequence

import numpy as np
import torch

from .. import NG_config

__all__ = ["BaseOptimizer"]


class BaseOptimizer(object):
    """
    Base optimizer object that other optimizers inherit from. Ensures consistent signature for the classes.

    Parameters:
        data: 1D sample the model is fitted to [tensor or array]
        max_iter: maximum allowed number of iterations [int]
        tolerance: absolute change in the objective below which the fit counts as converged [float]

    """

    def __init__(
        self,
        data: Sequence,
        max_iter: int = 100,
        tolerance: float = 1e-8,
        **kwargs,
    ) -> None:
        self.data = torch.as_tensor(
            np.asarray(data, dtype=np.float64).reshape(-1),
            dtype=NG_config.ng_dtype,
            device=NG_config.ng_device,
        )
        self.verbose = kwargs.get("verbose", 0)
        self.max_iter = max_iter
        self.iteration = 0
        self.tolerance = tolerance
        self.loss_history = []
        self.message = ""

    def fit(self) -> "BaseOptimizer":
        """
        Raises:
            NotImplementedError: Error is raised if this method is not implemented in a subclass of BaseOptimizer.
        """
        raise NotImplementedError(
            "Please use a subclass of BaseOptimizer for optimization"
        )

    def step(self) -> float:
        """
        Raises:
            NotImplementedError: Error is raised if this method is not implemented in a subclass of BaseOptimizer.
        """
        raise NotImplementedError(
            "Please use a subclass of BaseOptimizer for optimization"
        )

    def converged(self) -> bool:
        """True once the last objective change is below the tolerance."""
        if len(self.loss_history) < 2:
            return False
        return abs(self.loss_history[-1] - self.loss_history[-2]) < self.tolerance

    def best_loss(self) -> float:
        return np.nanmax(self.loss_history)
