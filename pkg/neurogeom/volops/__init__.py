from .mask_object import *
from .volumetry import *
from .components import *
from .morphology import *
from .segmentation import *

"""
mask_object: Binary_Mask and Label_Field.

volumetry: voxel counting volume measurement, single and batched.

components: connected component labeling and largest component selection.

morphology: ball closing and the largest-component-then-close topology fix.

segmentation: Gaussian mixture tissue posteriors.
"""
