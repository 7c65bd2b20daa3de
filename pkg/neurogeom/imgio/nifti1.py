import numpy as np
from nibabel.nifti1 import Nifti1Header

from .analyze import (
    HEADER_SIZE,
    detect_byteorder,
    fields_from_struct,
    struct_from_fields,
    decode_payload,
)
from .volume_object import Volume3D
from ..errors import HeaderTooShort, BadMagic, InvalidHeader, StorageError
from ..utils.operations import atomic_write
from .. import NG_config

__all__ = ["read_nifti1", "write_nifti1", "load_nifti1", "save_nifti1"]

MAGIC = b"n+1\x00"
VOX_OFFSET = 352


def read_nifti1(raw: bytes) -> Volume3D:
    """Parse a single-file NIfTI-1 payload.

    The magic field at offset 344 must read "n+1\\0"; the voxel data start
    at the header's vox_offset. Orientation, quaternion and intensity
    scaling fields are not interpreted.

    """
    raw = bytes(raw)
    if len(raw) < HEADER_SIZE:
        raise HeaderTooShort(f"NIfTI-1 header needs {HEADER_SIZE} bytes, got {len(raw)}")
    if raw[344:348] != MAGIC:
        raise BadMagic(f"magic field is {raw[344:348]!r}, expected {MAGIC!r}")
    order = detect_byteorder(raw)
    hdr = Nifti1Header(raw[:HEADER_SIZE], endianness=order, check=False)
    header = fields_from_struct(hdr, "Nifti1", raw)
    offset = int(hdr["vox_offset"])
    if offset < HEADER_SIZE:
        raise InvalidHeader(f"vox_offset {offset} points inside the header")
    return decode_payload(header, raw, offset=offset)


def write_nifti1(vol: Volume3D) -> bytes:
    """Encode a volume as a single-file NIfTI-1 with vox_offset 352 and
    an empty extension block.

    """
    header = vol.header
    if header.format != "Nifti1":
        header = header.copy(format="Nifti1", raw=None)
    hdr = struct_from_fields(header, Nifti1Header)
    hdr["vox_offset"] = VOX_OFFSET
    hdr["magic"] = MAGIC[:3]
    image = np.asarray(vol.data, dtype=header.disk_dtype).tobytes(order="F")
    return hdr.binaryblock + b"\x00" * (VOX_OFFSET - HEADER_SIZE) + image


def load_nifti1(path: str) -> Volume3D:
    try:
        with open(path, "rb") as f:
            vol = read_nifti1(f.read())
    except OSError as e:
        raise StorageError(f"could not read {path}: {e}") from e
    NG_config.ng_logger.info(f"loaded {path}: {vol}")
    return vol


def save_nifti1(vol: Volume3D, path: str) -> str:
    atomic_write(path, write_nifti1(vol))
    NG_config.ng_logger.info(f"saved {path}")
    return path
