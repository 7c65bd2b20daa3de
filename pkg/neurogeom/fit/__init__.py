from .base import *
from .em import *

"""
base: optimizer base class holding the data, iteration count and objective history.

em: expectation-maximization for one dimensional Gaussian mixtures.
"""
