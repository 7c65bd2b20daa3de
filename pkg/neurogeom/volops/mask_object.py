from typing import Dict, Sequence

import numpy as np

from ..imgio import Volume3D
from ..errors import SizeMismatch

__all__ = ["Binary_Mask", "Label_Field"]


class Binary_Mask(object):
    """Three dimensional 0/1 mask with its voxel size.

    Any nonzero value of the source array is taken as set. The bits are
    stored as an (nx, ny, nz) boolean array; ``flat`` gives them in file
    order with x varying fastest.

    """

    def __init__(self, bits, voxel_size: Sequence[float] = (1.0, 1.0, 1.0), dims=None) -> None:
        bits = np.asarray(bits)
        if dims is not None:
            dims = tuple(int(d) for d in dims)
            if bits.ndim == 1:
                if bits.size != int(np.prod(dims)):
                    raise SizeMismatch(f"{bits.size} bits do not fill dims {dims}")
                bits = bits.reshape(dims, order="F")
        if bits.ndim == 4 and bits.shape[3] == 1:
            bits = bits[..., 0]
        if bits.ndim != 3:
            raise SizeMismatch(f"a mask needs three dimensions, got shape {bits.shape}")
        self._bits = np.array(bits != 0, dtype=bool)
        self._bits.flags.writeable = False
        self.voxel_size = tuple(float(v) for v in voxel_size)

    @classmethod
    def from_volume(cls, vol: Volume3D) -> "Binary_Mask":
        return cls(vol.array3d, voxel_size=vol.voxel_size)

    def to_volume(self, **kwargs) -> Volume3D:
        return Volume3D.from_array(self._bits.astype(np.uint8), voxel_size=self.voxel_size, **kwargs)

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def flat(self) -> np.ndarray:
        return self._bits.ravel(order="F")

    @property
    def dims(self):
        return self._bits.shape

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self._bits))

    def with_bits(self, bits) -> "Binary_Mask":
        return self.__class__(bits, voxel_size=self.voxel_size)

    def __eq__(self, other):
        if not isinstance(other, Binary_Mask):
            return NotImplemented
        return np.array_equal(self._bits, other._bits) and self.voxel_size == other.voxel_size

    def __str__(self):
        return f"mask {self.dims} with {self.count} set voxels"


class Label_Field(object):
    """Component labels of a mask: 0 is background and components are
    numbered 1..L without gaps.

    """

    def __init__(self, labels, component_sizes: Dict[int, int], voxel_size=(1.0, 1.0, 1.0)) -> None:
        labels = np.array(labels, dtype=np.int32)
        labels.flags.writeable = False
        self._labels = labels
        self.component_sizes = dict(component_sizes)
        self.voxel_size = tuple(voxel_size)

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def flat(self) -> np.ndarray:
        return self._labels.ravel(order="F")

    @property
    def dims(self):
        return self._labels.shape

    @property
    def n_components(self) -> int:
        return len(self.component_sizes)

    def component(self, label: int) -> Binary_Mask:
        return Binary_Mask(self._labels == label, voxel_size=self.voxel_size)
