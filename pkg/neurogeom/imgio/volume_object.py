from typing import Optional, Sequence, Union

import numpy as np

from .header_object import Volume_Header, datatype_code, DATATYPE_CODES
from ..errors import InvalidHeader, PayloadSizeMismatch
from ..utils.operations import flat_index, pad_array

__all__ = ["Volume3D"]


class Volume3D(object):
    """Dense voxel grid with its header metadata.

    The voxel values are held as a read-only array of shape (nx, ny, nz, nt)
    whose element (i,j,k,t) sits at flat position i + nx*(j + ny*(k + nz*t)),
    that is x varies fastest in the flat view. Volumes are immutable after
    construction; every operation that changes data returns a new volume.

    Parameters:
        header: a Volume_Header describing dims, voxel size and datatype
        data: either the flat x-fastest sequence of nx*ny*nz*nt values or an array of shape (nx, ny, nz[, nt])
    """

    def __init__(self, header: Volume_Header, data) -> None:
        self.header = header
        data = np.asarray(data)
        if data.dtype != header.dtype:
            if data.dtype.newbyteorder("=") != header.dtype:
                raise InvalidHeader(
                    f"data type {data.dtype} does not match header datatype {header.datatype_name}"
                )
            data = data.astype(header.dtype)
        if data.ndim == 1:
            if data.size != header.n_voxels:
                raise PayloadSizeMismatch(
                    f"expected {header.n_voxels} values for dims {header.dims}, got {data.size}"
                )
            data = data.reshape(header.dims, order="F")
        elif data.ndim == 3:
            data = data[..., None]
        if tuple(data.shape) != header.dims:
            raise PayloadSizeMismatch(
                f"data shape {data.shape} does not match dims {header.dims}"
            )
        self._data = np.array(data, dtype=header.dtype, copy=True)
        self._data.flags.writeable = False

    @classmethod
    def from_array(
        cls,
        array,
        voxel_size: Sequence[float] = (1.0, 1.0, 1.0),
        datatype: Optional[Union[int, str]] = None,
        **kwargs,
    ) -> "Volume3D":
        """Build a volume from an (nx, ny, nz[, nt]) array. The datatype
        is taken from the array unless given; boolean masks become uint8.

        """
        array = np.asarray(array)
        if array.dtype == bool:
            array = array.astype(np.uint8)
        code = datatype_code(array.dtype if datatype is None else datatype)
        array = array.astype(DATATYPE_CODES[code])
        header = Volume_Header(
            dims=array.shape, voxel_size=voxel_size, datatype=code, **kwargs
        )
        return cls(header, array)

    @property
    def data(self) -> np.ndarray:
        """Voxel values as a read-only (nx, ny, nz, nt) array."""
        return self._data

    @property
    def array3d(self) -> np.ndarray:
        """The first time frame as an (nx, ny, nz) array."""
        return self._data[..., 0]

    @property
    def flat(self) -> np.ndarray:
        """Voxel values in file order, x varying fastest."""
        return self._data.ravel(order="F")

    @property
    def dims(self):
        return self.header.dims

    @property
    def voxel_size(self):
        return self.header.voxel_size

    @property
    def shape3d(self):
        return self.header.dims[:3]

    def flat_index(self, i: int, j: int, k: int, t: int = 0) -> int:
        return flat_index(i, j, k, t, self.dims)

    def voxel(self, i: int, j: int, k: int, t: int = 0):
        return self._data[i, j, k, t]

    def with_data(self, data, datatype=None, **kwargs) -> "Volume3D":
        """New volume with the same geometry holding ``data``."""
        data = np.asarray(data)
        if data.dtype == bool:
            data = data.astype(np.uint8)
        code = datatype_code(data.dtype if datatype is None else datatype)
        header = self.header.copy(
            dims=data.shape if data.ndim == 4 else tuple(data.shape) + (1,),
            datatype=code,
            **kwargs,
        )
        return self.__class__(header, data.astype(DATATYPE_CODES[code]))

    def astype(self, datatype) -> "Volume3D":
        return self.with_data(self._data, datatype=datatype)

    def pad(self, width: int) -> "Volume3D":
        """Zero pad ``width`` voxels on every side of the spatial axes."""
        if width <= 0:
            return self
        return self.with_data(pad_array(self._data, width), datatype=self.header.datatype)

    def __eq__(self, other):
        if not isinstance(other, Volume3D):
            return NotImplemented
        return (
            self.header == other.header
            and self._data.tobytes() == other._data.tobytes()
        )

    def __str__(self):
        return f"volume {self.dims} {self.header.datatype_name} voxel {self.voxel_size} mm"
