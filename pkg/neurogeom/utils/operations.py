import os
import tempfile
from contextlib import contextmanager
from typing import Union

import numpy as np

from ..errors import StorageError
from .. import NG_config

__all__ = ["atomic_write", "staged_outputs", "flat_index", "ball_structure", "pad_array"]

# open staging batches, innermost last; each holds (temporary, target) pairs
_staged = []


def _file_mode() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return 0o666 & ~mask


def _discard(tmp: str) -> None:
    if os.path.exists(tmp):
        os.remove(tmp)


@contextmanager
def staged_outputs():
    """Hold back every :func:`atomic_write` inside the block and rename
    the files into place together when the block exits cleanly. On an
    exception the staged files are removed and no target is touched.
    Blocks nest; only the outermost one renames.

    """
    batch = []
    _staged.append(batch)
    try:
        yield batch
    except BaseException:
        _staged.pop()
        for tmp, _ in batch:
            _discard(tmp)
        raise
    _staged.pop()
    if len(_staged) > 0:
        # nested block, the outer one commits
        _staged[-1].extend(batch)
        return
    try:
        for i, (tmp, path) in enumerate(batch):
            os.replace(tmp, path)
    except OSError as e:
        for tmp, _ in batch[i:]:
            _discard(tmp)
        raise StorageError(f"could not write {path}: {e}") from e
    if len(batch) > 0:
        NG_config.ng_logger.debug(f"committed {len(batch)} outputs")


def atomic_write(path: str, payload: Union[bytes, str]) -> str:
    """Write ``payload`` to ``path`` through a temporary file in the same
    directory followed by a rename, so a failed run never leaves a
    partial output behind. Inside :func:`staged_outputs` the rename waits
    for the end of the block.

    """
    if isinstance(payload, str):
        payload = payload.encode("utf-8")
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(prefix=".ng_", dir=directory)
        try:
            with os.fdopen(fd, "wb") as f:
                f.write(payload)
            # mkstemp creates 0600
            os.chmod(tmp, _file_mode())
            if len(_staged) > 0:
                _staged[-1].append((tmp, path))
            else:
                os.replace(tmp, path)
        except BaseException:
            _discard(tmp)
            raise
    except OSError as e:
        raise StorageError(f"could not write {path}: {e}") from e
    NG_config.ng_logger.debug(f"wrote {len(payload)} bytes to {path}")
    return path


def flat_index(i, j, k, t, dims):
    """Flat position of voxel (i,j,k,t) with x varying fastest."""
    nx, ny, nz, _ = dims
    return i + nx * (j + ny * (k + nz * t))


def ball_structure(radius: int) -> np.ndarray:
    """Discrete Euclidean ball: offset (dx,dy,dz) is included iff
    dx^2 + dy^2 + dz^2 <= radius^2.

    """
    r = int(radius)
    d = np.arange(-r, r + 1)
    dx, dy, dz = np.meshgrid(d, d, d, indexing="ij")
    return (dx**2 + dy**2 + dz**2) <= r**2


def pad_array(array: np.ndarray, width: int, value=0) -> np.ndarray:
    """Constant pad on every side of the three spatial axes only."""
    pads = [(width, width)] * 3 + [(0, 0)] * (array.ndim - 3)
    return np.pad(array, pads, mode="constant", constant_values=value)
