from .eigen import *
from .tensor_object import *
from .anisotropy import *
from .tracts import *

"""
eigen: batched symmetric 3x3 eigensolver, closed form with a Jacobi fallback.

tensor_object: Diffusion_Tensor, Eigen_System and the six-volume Tensor_Field.

anisotropy: fractional anisotropy, mean diffusivity and principal direction maps.

tracts: tract polylines, their text and packed formats, subsampling and endpoints.
"""
