import numpy as np
from skimage.measure import label

from .mask_object import Binary_Mask, Label_Field
from ..errors import EmptyMask, UsageError
from .. import NG_config

__all__ = ["connected_components", "largest_component"]

# adjacency -> skimage connectivity (number of orthogonal hops)
CONNECTIVITY = {6: 1, 18: 2, 26: 3}


def connected_components(mask: Binary_Mask, connectivity: int = 6) -> Label_Field:
    """Label the connected foreground components of ``mask``.

    Labels run 1..L by decreasing component size; equal sizes are ordered
    by the flat (x fastest) index of each component's first voxel.

    Parameters:
        mask: the binary mask
        connectivity: 6 (faces), 18 (faces and edges) or 26 (faces, edges and corners)
    """
    if connectivity not in CONNECTIVITY:
        raise UsageError(f"connectivity must be one of 6, 18, 26, got {connectivity}")
    raw = label(mask.bits, background=0, connectivity=CONNECTIVITY[connectivity])
    flat = raw.ravel(order="F")
    found, first = np.unique(flat, return_index=True)
    keep = found != 0
    found, first = found[keep], first[keep]
    sizes = np.bincount(flat, minlength=int(flat.max()) + 1)[found]

    order = np.lexsort((first, -sizes))
    remap = np.zeros(int(flat.max()) + 1, dtype=np.int32)
    remap[found[order]] = np.arange(1, len(order) + 1, dtype=np.int32)
    labels = remap[raw]
    component_sizes = {int(i + 1): int(sizes[o]) for i, o in enumerate(order)}
    NG_config.ng_logger.debug(
        f"{len(component_sizes)} components under {connectivity}-connectivity"
    )
    return Label_Field(labels, component_sizes, voxel_size=mask.voxel_size)


def largest_component(mask: Binary_Mask, connectivity: int = 6) -> Binary_Mask:
    """Keep only the largest connected component; ties go to the component
    holding the smallest flat index.

    """
    if mask.count == 0:
        raise EmptyMask("mask has no set voxels")
    field = connected_components(mask, connectivity)
    if field.n_components > 1:
        dropped = mask.count - field.component_sizes[1]
        NG_config.ng_logger.info(
            f"removed {field.n_components - 1} components ({dropped} voxels)"
        )
    return field.component(1)
