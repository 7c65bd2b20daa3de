import numpy as np
from scipy import ndimage

from .mask_object import Binary_Mask
from .components import largest_component
from ..errors import UsageError
from ..utils.operations import ball_structure, pad_array
from .. import NG_config

__all__ = ["morphological_close", "fix_topology"]


def morphological_close(mask: Binary_Mask, radius: int) -> Binary_Mask:
    """Dilation then erosion by the discrete Euclidean ball of ``radius``.

    The mask is zero padded by the radius before both passes and cropped
    afterwards, so voxels outside the volume count as background and the
    result inside the volume equals the closing on an unbounded grid.
    Closing is therefore extensive and idempotent.

    """
    radius = int(radius)
    if radius < 1:
        raise UsageError(f"closing radius must be a positive integer, got {radius}")
    if mask.count == 0:
        return mask

    element = ball_structure(radius)
    padded = pad_array(mask.bits, radius, value=False)
    dilated = ndimage.binary_dilation(padded, structure=element)
    closed = ndimage.binary_erosion(dilated, structure=element, border_value=0)
    crop = tuple(slice(radius, radius + n) for n in mask.dims)
    closed = closed[crop]

    NG_config.ng_logger.info(
        f"closing radius {radius} filled {int(np.count_nonzero(closed)) - mask.count} voxels"
    )
    return mask.with_bits(closed)


def fix_topology(mask: Binary_Mask, radius: int = 1, connectivity: int = 6) -> Binary_Mask:
    """Topology correction of a segmentation: speckles are removed by
    keeping the largest connected component, then small holes and handles
    are filled by morphological closing.

    """
    return morphological_close(largest_component(mask, connectivity), radius)
