from .landmark_object import *
from .transform_object import *
from .estimate import *

"""
landmark_object: Landmark_Set and the label,x,y,z CSV format.

transform_object: Affine_Transform (4x4 homogeneous matrix) and its text format.

estimate: least-squares affine and rigid fits, inversion, application and residuals.
"""
