from typing import Optional, Sequence, Union

import numpy as np

from ..errors import InvalidHeader, UnsupportedDatatype

__all__ = ["Volume_Header", "DATATYPE_CODES", "DATATYPE_NAMES"]

# Analyze 7.5 / NIfTI-1 datatype codes supported here
DATATYPE_CODES = {
    2: np.dtype(np.uint8),
    4: np.dtype(np.int16),
    8: np.dtype(np.int32),
    16: np.dtype(np.float32),
    64: np.dtype(np.float64),
}
DATATYPE_NAMES = {
    2: "uint8",
    4: "int16",
    8: "int32",
    16: "float32",
    64: "float64",
}
_NAME_TO_CODE = dict((name, code) for code, name in DATATYPE_NAMES.items())

FORMATS = ("Analyze75", "Nifti1")
ENDIANNESS = {"little": "<", "big": ">"}


def datatype_code(datatype: Union[int, str, np.dtype]) -> int:
    """Resolve a datatype given as code, name or numpy dtype to its code."""
    if isinstance(datatype, (int, np.integer)) and int(datatype) in DATATYPE_CODES:
        return int(datatype)
    if isinstance(datatype, str) and datatype in _NAME_TO_CODE:
        return _NAME_TO_CODE[datatype]
    try:
        dt = np.dtype(datatype).newbyteorder("=")
    except TypeError:
        raise UnsupportedDatatype(f"unsupported datatype {datatype!r}")
    if dt == np.dtype(bool):
        return 2
    for code, ref in DATATYPE_CODES.items():
        if dt == ref:
            return code
    raise UnsupportedDatatype(f"unsupported datatype {datatype!r}")


class Volume_Header(object):
    """Geometry and storage metadata of a voxel volume.

    Parameters:
        dims: four positive integers (nx, ny, nz, nt); nt = 1 for purely spatial volumes
        voxel_size: three positive voxel edge lengths in mm, held at the float32 precision of the file header
        datatype: one of uint8, int16, int32, float32, float64 (name, code or numpy dtype)
        endianness: "little" or "big"
        description: free text, at most 80 bytes
        format: "Analyze75" or "Nifti1"
        raw: the original header bytes, kept so that fields this package does not model survive a round trip
    """

    def __init__(
        self,
        dims: Sequence[int],
        voxel_size: Sequence[float] = (1.0, 1.0, 1.0),
        datatype: Union[int, str, np.dtype] = "uint8",
        endianness: str = "little",
        description: str = "",
        format: str = "Analyze75",
        raw: Optional[bytes] = None,
    ) -> None:
        dims = tuple(int(d) for d in dims)
        if len(dims) == 3:
            dims = dims + (1,)
        if len(dims) != 4 or any(d < 1 for d in dims):
            raise InvalidHeader(f"dims must be four positive integers, got {dims}")
        self.dims = dims

        voxel_size = tuple(float(np.float32(v)) for v in voxel_size)
        if len(voxel_size) != 3 or not all(
            np.isfinite(v) and v > 0 for v in voxel_size
        ):
            raise InvalidHeader(
                f"voxel_size must be three positive reals, got {voxel_size}"
            )
        self.voxel_size = voxel_size

        self.datatype = datatype_code(datatype)

        if endianness not in ENDIANNESS:
            raise InvalidHeader(f"endianness must be little or big, got {endianness}")
        self.endianness = endianness

        if len(description.encode("latin-1")) > 80:
            raise InvalidHeader("description is limited to 80 bytes")
        self.description = description

        if format not in FORMATS:
            raise InvalidHeader(f"format must be one of {FORMATS}, got {format}")
        self.format = format
        self.raw = None if raw is None else bytes(raw)

    @property
    def dtype(self) -> np.dtype:
        """Native-order numpy type of the voxel values."""
        return DATATYPE_CODES[self.datatype]

    @property
    def disk_dtype(self) -> np.dtype:
        """Numpy type of the voxel values as laid out in the file."""
        return self.dtype.newbyteorder(ENDIANNESS[self.endianness])

    @property
    def byteorder(self) -> str:
        return ENDIANNESS[self.endianness]

    @property
    def datatype_name(self) -> str:
        return DATATYPE_NAMES[self.datatype]

    @property
    def bitpix(self) -> int:
        return self.dtype.itemsize * 8

    @property
    def bytes_per_voxel(self) -> int:
        return self.dtype.itemsize

    @property
    def n_voxels(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64))

    @property
    def payload_size(self) -> int:
        return self.n_voxels * self.bytes_per_voxel

    def copy(self, **kwargs):
        """Produce a copy of this header with any fields replaced by keyword."""
        state = {
            "dims": self.dims,
            "voxel_size": self.voxel_size,
            "datatype": self.datatype,
            "endianness": self.endianness,
            "description": self.description,
            "format": self.format,
            "raw": self.raw,
        }
        state.update(kwargs)
        return self.__class__(**state)

    def info(self):
        """Stable ordered (key, value) pairs describing the header."""
        return [
            ("format", self.format),
            ("endianness", self.endianness),
            ("dims", " ".join(str(d) for d in self.dims)),
            ("voxel_size", " ".join(f"{v:.6g}" for v in self.voxel_size)),
            ("datatype", self.datatype_name),
            ("bitpix", str(self.bitpix)),
            ("description", self.description),
        ]

    def __eq__(self, other):
        if not isinstance(other, Volume_Header):
            return NotImplemented
        return (
            self.dims == other.dims
            and self.voxel_size == other.voxel_size
            and self.datatype == other.datatype
            and self.endianness == other.endianness
            and self.description == other.description
            and self.format == other.format
        )

    def __str__(self):
        return "\n".join(f"{key}: {value}" for key, value in self.info())

    def __repr__(self):
        return (
            f"Volume_Header(dims={self.dims}, voxel_size={self.voxel_size}, "
            f"datatype={self.datatype_name}, endianness={self.endianness}, format={self.format})"
        )
