import csv
import io
from typing import List, Sequence, Tuple

import numpy as np

from ..errors import TractFormatError, StorageError, UsageError
from ..utils.operations import atomic_write
from .. import NG_config

__all__ = [
    "Tract",
    "parse_tracts",
    "format_tracts",
    "pack_tracts",
    "unpack_tracts",
    "load_tracts",
    "save_tracts",
    "subsample_tracts",
    "tract_endpoints",
    "format_endpoints",
]

PACKED_MAGIC = b"NGTR1"


class Tract(object):
    """Polyline of at least two points in mm, no two consecutive points equal."""

    def __init__(self, points, index=None) -> None:
        points = np.array(points, dtype=np.float64).reshape(-1, 3)
        if len(points) < 2:
            raise TractFormatError(f"a tract needs at least 2 points, got {len(points)}", index=index)
        if not np.all(np.isfinite(points)):
            raise TractFormatError("tract coordinates must be finite", index=index)
        if np.any(np.all(points[1:] == points[:-1], axis=1)):
            raise TractFormatError("tract repeats a point consecutively", index=index)
        points.flags.writeable = False
        self._points = points

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def head(self) -> np.ndarray:
        return self._points[0]

    @property
    def tail(self) -> np.ndarray:
        return self._points[-1]

    def __len__(self):
        return len(self._points)

    def __eq__(self, other):
        if not isinstance(other, Tract):
            return NotImplemented
        return np.array_equal(self._points, other._points)


def parse_tracts(text: str) -> List[Tract]:
    """Tracts from the text format: a ``TRACT <n>`` line followed by n
    ``x y z`` lines per tract, blocks separated by blank lines.
    Errors carry the index of the offending tract.

    """
    lines = text.splitlines()
    tracts = []
    i = 0
    while i < len(lines):
        tokens = lines[i].split()
        if not tokens:
            i += 1
            continue
        index = len(tracts)
        if len(tokens) != 2 or tokens[0] != "TRACT":
            raise TractFormatError(f"expected 'TRACT <n>' on line {i + 1}", index=index)
        try:
            count = int(tokens[1])
        except ValueError as e:
            raise TractFormatError(f"bad point count '{tokens[1]}' on line {i + 1}", index=index) from e
        block = lines[i + 1 : i + 1 + count]
        if len(block) < count:
            raise TractFormatError(f"file ends after {len(block)} of {count} points", index=index)
        try:
            points = [[float(v) for v in line.split()] for line in block]
        except ValueError as e:
            raise TractFormatError(f"non-numeric coordinate: {e}", index=index) from e
        if any(len(p) != 3 for p in points):
            raise TractFormatError("every point line needs three coordinates", index=index)
        tracts.append(Tract(points, index=index))
        i += 1 + count
    return tracts


def format_tracts(tracts: Sequence[Tract]) -> str:
    blocks = []
    for tract in tracts:
        rows = [f"TRACT {len(tract)}"]
        rows += ["%.17g %.17g %.17g" % tuple(p) for p in tract.points]
        blocks.append("\n".join(rows) + "\n")
    return "\n".join(blocks)


def pack_tracts(tracts: Sequence[Tract]) -> bytes:
    """NGTR1 bytes: magic, tract count and per-tract point counts as
    little-endian uint64, then every point as little-endian float64.

    """
    counts = np.array([len(t) for t in tracts], dtype="<u8")
    points = (
        np.concatenate([t.points for t in tracts]) if tracts else np.zeros((0, 3))
    ).astype("<f8")
    return PACKED_MAGIC + np.array([len(tracts)], dtype="<u8").tobytes() + counts.tobytes() + points.tobytes()


def unpack_tracts(raw: bytes) -> List[Tract]:
    offset = len(PACKED_MAGIC)
    if raw[:offset] != PACKED_MAGIC:
        raise TractFormatError("missing NGTR1 magic")
    if len(raw) < offset + 8:
        raise TractFormatError("packed tract header is truncated")
    n = int(np.frombuffer(raw, dtype="<u8", count=1, offset=offset)[0])
    offset += 8
    if len(raw) < offset + 8 * n:
        raise TractFormatError("packed tract counts are truncated")
    counts = np.frombuffer(raw, dtype="<u8", count=n, offset=offset).astype(np.int64)
    offset += 8 * n
    total = int(counts.sum())
    if len(raw) != offset + 24 * total:
        raise TractFormatError(f"packed tracts hold {len(raw) - offset} point bytes, counts imply {24 * total}")
    points = np.frombuffer(raw, dtype="<f8", count=3 * total, offset=offset).reshape(-1, 3)
    starts = np.concatenate([[0], np.cumsum(counts)])
    return [Tract(points[starts[i] : starts[i + 1]], index=i) for i in range(n)]


def load_tracts(path: str) -> List[Tract]:
    """Tracts from a text or NGTR1 file, told apart by the magic bytes."""
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as e:
        raise StorageError(f"could not read {path}: {e}") from e
    if raw.startswith(PACKED_MAGIC):
        tracts = unpack_tracts(raw)
    else:
        try:
            text = raw.decode("ascii")
        except UnicodeDecodeError as e:
            raise TractFormatError(f"{path} is neither NGTR1 nor text") from e
        tracts = parse_tracts(text)
    NG_config.ng_logger.info(f"loaded {len(tracts)} tracts from {path}")
    return tracts


def save_tracts(tracts: Sequence[Tract], path: str, packed: bool = False) -> str:
    atomic_write(path, pack_tracts(tracts) if packed else format_tracts(tracts))
    NG_config.ng_logger.info(f"saved {len(tracts)} tracts to {path}")
    return path


def subsample_tracts(tracts: Sequence[Tract], stride: int, min_points: int = 0) -> List[Tract]:
    """Every ``stride``-th tract, starting at index 0, with more than
    ``min_points`` points.

    """
    if stride < 1:
        raise UsageError(f"stride must be a positive integer, got {stride}")
    return [t for t in tracts[::stride] if len(t) > min_points]


def tract_endpoints(tracts: Sequence[Tract]) -> List[Tuple[int, str, np.ndarray]]:
    """(tract index, 'head' or 'tail', point) for both ends of every tract."""
    ends = []
    for i, tract in enumerate(tracts):
        ends.append((i, "head", tract.head))
        ends.append((i, "tail", tract.tail))
    return ends


def format_endpoints(endpoints) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["tract", "end", "x", "y", "z"])
    for index, end, point in endpoints:
        writer.writerow([index, end] + ["%.17g" % c for c in point])
    return out.getvalue()
