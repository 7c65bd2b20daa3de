import os

from .header_object import *
from .volume_object import *
from .analyze import *
from .nifti1 import *

"""
header_object: the Volume_Header model (dims, voxel size, datatype, byte order).

volume_object: Volume3D, an immutable voxel grid indexed with x varying fastest.

analyze: bit-exact Analyze 7.5 header/image pair codec.

nifti1: single-file NIfTI-1 codec sharing the Analyze field layout.
"""


def load_volume(path: str) -> Volume3D:
    """Read a volume, choosing the codec from the file suffix."""
    ext = os.path.splitext(path)[1].lower()
    if ext == ".nii":
        return load_nifti1(path)
    return load_analyze(path)


def save_volume(vol: Volume3D, path: str):
    """Write a volume; ``.nii`` paths give NIfTI-1, anything else an Analyze pair."""
    if os.path.splitext(path)[1].lower() == ".nii":
        return save_nifti1(vol, path)
    return save_analyze(vol, path)
