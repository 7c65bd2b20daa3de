import os
from typing import Tuple

import numpy as np
from nibabel.analyze import AnalyzeHeader

from .header_object import Volume_Header, DATATYPE_CODES
from .volume_object import Volume3D
from ..errors import (
    HeaderTooShort,
    BadMagicSize,
    UnsupportedDatatype,
    PayloadSizeMismatch,
    InvalidHeader,
    StorageError,
)
from ..utils.operations import atomic_write, staged_outputs
from .. import NG_config

__all__ = [
    "HEADER_SIZE",
    "read_analyze_header",
    "read_analyze_volume",
    "write_analyze",
    "load_analyze",
    "save_analyze",
]

HEADER_SIZE = 348


def detect_byteorder(raw: bytes) -> str:
    """Byte order under which the int32 at offset 0 decodes to 348."""
    if len(raw) < HEADER_SIZE:
        raise HeaderTooShort(
            f"header needs {HEADER_SIZE} bytes, got {len(raw)}"
        )
    if int(np.frombuffer(raw, dtype="<i4", count=1)[0]) == HEADER_SIZE:
        return "<"
    if int(np.frombuffer(raw, dtype=">i4", count=1)[0]) == HEADER_SIZE:
        return ">"
    raise BadMagicSize("sizeof_hdr field is not 348 in either byte order")


def fields_from_struct(hdr, fmt: str, raw: bytes) -> Volume_Header:
    """Decode the modelled fields of a nibabel header struct."""
    dim = np.asarray(hdr["dim"], dtype=np.int64)
    ndim = int(dim[0])
    if ndim < 1 or ndim > 7:
        raise InvalidHeader(f"dim[0] must be in 1..7, got {ndim}")
    if ndim > 4 and np.any(dim[5 : ndim + 1] > 1):
        raise InvalidHeader(f"volumes with more than four dimensions are not supported: {dim}")
    dims = []
    for axis in range(1, 5):
        size = int(dim[axis]) if axis <= ndim else 1
        if axis == 4 and size == 0:
            size = 1
        if size < 1:
            raise InvalidHeader(f"non-positive dimension in dim field {dim[: ndim + 1]}")
        dims.append(size)

    code = int(hdr["datatype"])
    if code not in DATATYPE_CODES:
        raise UnsupportedDatatype(f"datatype code {code} is not supported")

    pixdim = np.asarray(hdr["pixdim"], dtype=np.float64)
    description = bytes(np.asarray(hdr["descrip"]).item()).split(b"\x00")[0]

    return Volume_Header(
        dims=dims,
        voxel_size=pixdim[1:4],
        datatype=code,
        endianness="little" if hdr.endianness == "<" else "big",
        description=description.decode("latin-1"),
        format=fmt,
        raw=raw[:HEADER_SIZE],
    )


def struct_from_fields(header: Volume_Header, klass):
    """nibabel header struct holding ``header``. Fields this package does
    not model are taken from ``header.raw`` when present.

    """
    if header.raw is not None and len(header.raw) >= HEADER_SIZE:
        hdr = klass(header.raw[:HEADER_SIZE], endianness=detect_byteorder(header.raw), check=False)
        if hdr.endianness != header.byteorder:
            hdr = hdr.as_byteswapped(header.byteorder)
    else:
        hdr = klass(endianness=header.byteorder, check=False)

    dim = np.array(hdr["dim"], dtype=np.int16)
    dim[0] = 4 if header.dims[3] > 1 or dim[0] < 3 or dim[0] > 4 else dim[0]
    dim[1:5] = header.dims
    dim[5:] = 1
    hdr["dim"] = dim
    hdr["datatype"] = header.datatype
    hdr["bitpix"] = header.bitpix
    pixdim = np.array(hdr["pixdim"], dtype=np.float32)
    pixdim[1:4] = header.voxel_size
    hdr["pixdim"] = pixdim
    hdr["descrip"] = header.description.encode("latin-1")
    return hdr


def read_analyze_header(raw: bytes) -> Volume_Header:
    """Parse the contents of an Analyze 7.5 ``.hdr`` file.

    The byte order is the one under which the sizeof_hdr field at offset
    0 reads 348. The dim (offset 40), datatype (70), bitpix (72) and
    pixdim (76) fields are decoded; everything else is carried along as
    opaque bytes.

    """
    raw = bytes(raw)
    order = detect_byteorder(raw)
    hdr = AnalyzeHeader(raw[:HEADER_SIZE], endianness=order, check=False)
    header = fields_from_struct(hdr, "Analyze75", raw)
    NG_config.ng_logger.debug(f"parsed analyze header {header!r}")
    return header


def decode_payload(header: Volume_Header, raw: bytes, offset: int = 0) -> Volume3D:
    needed = header.payload_size
    available = len(raw) - offset
    if available < needed:
        raise PayloadSizeMismatch(
            f"payload holds {max(available, 0)} bytes, dims {header.dims} of {header.datatype_name} need {needed}"
        )
    values = np.frombuffer(raw, dtype=header.disk_dtype, count=header.n_voxels, offset=offset)
    return Volume3D(header, values.astype(header.dtype))


def read_analyze_volume(header: Volume_Header, raw: bytes) -> Volume3D:
    """Decode the ``.img`` payload described by ``header``."""
    if header.datatype not in DATATYPE_CODES:
        raise UnsupportedDatatype(f"datatype code {header.datatype} is not supported")
    return decode_payload(header, bytes(raw))


def write_analyze(vol: Volume3D) -> Tuple[bytes, bytes]:
    """Encode a volume as the (header bytes, image bytes) of an Analyze pair."""
    header = vol.header
    if header.format != "Analyze75":
        header = header.copy(format="Analyze75", raw=None)
    hdr = struct_from_fields(header, AnalyzeHeader)
    image = np.asarray(vol.data, dtype=header.disk_dtype).tobytes(order="F")
    return hdr.binaryblock, image


def analyze_paths(path: str) -> Tuple[str, str]:
    base, ext = os.path.splitext(path)
    if ext.lower() not in (".hdr", ".img"):
        base = path
    return base + ".hdr", base + ".img"


def load_analyze(path: str) -> Volume3D:
    """Read an Analyze pair given the ``.hdr``, the ``.img`` or the common prefix."""
    hdr_path, img_path = analyze_paths(path)
    try:
        with open(hdr_path, "rb") as f:
            header = read_analyze_header(f.read())
        with open(img_path, "rb") as f:
            vol = read_analyze_volume(header, f.read())
    except OSError as e:
        raise StorageError(f"could not read analyze pair {path}: {e}") from e
    NG_config.ng_logger.info(f"loaded {hdr_path}: {vol}")
    return vol


def save_analyze(vol: Volume3D, path: str) -> Tuple[str, str]:
    hdr_path, img_path = analyze_paths(path)
    hdr_bytes, img_bytes = write_analyze(vol)
    with staged_outputs():
        atomic_write(img_path, img_bytes)
        atomic_write(hdr_path, hdr_bytes)
    NG_config.ng_logger.info(f"saved {hdr_path}")
    return hdr_path, img_path
