from typing import List, Sequence, Tuple

import numpy as np

from .mask_object import Binary_Mask

__all__ = ["measure_volume", "batch_volumes"]


def measure_volume(mask: Binary_Mask) -> Tuple[int, float]:
    """Number of set voxels and the volume they occupy in mm^3."""
    count = mask.count
    return count, float(count * np.prod(mask.voxel_size))


def batch_volumes(masks: Sequence[Binary_Mask], names: Sequence[str] = None) -> List[Tuple[str, int, float]]:
    """One (name, voxel_count, volume_mm3) row per mask, in input order."""
    if names is None:
        names = [f"subject_{i}" for i in range(len(masks))]
    return [(name,) + measure_volume(mask) for name, mask in zip(names, masks)]
