import csv
import io
import os
from typing import Sequence

import numpy as np
from tqdm import tqdm

from ..mesh import Tri_Mesh, read_ply
from ..errors import (
    EnsembleFormatError,
    EmptyEnsemble,
    StorageError,
    TopologyMismatch,
)
from ..utils.operations import atomic_write
from .. import NG_config

__all__ = [
    "Surface_Ensemble",
    "load_ensemble",
    "read_ensemble_manifest",
    "pack_ensemble",
    "unpack_ensemble",
    "write_packed_ensemble",
]

PACKED_MAGIC = b"NGEN1"


class Surface_Ensemble(object):
    """Meshes of ``s`` subjects sharing one face connectivity.

    Parameters:
        coords: (s, n, 3) vertex coordinates, multiplied by ``voxel_scale`` on construction
        faces: (m, 3) shared faces
        subject_ids: one identifier per subject
        voxel_scale: optional per-subject mm per coordinate unit

    """

    def __init__(self, coords, faces, subject_ids: Sequence[str] = None, voxel_scale=None) -> None:
        coords = np.array(coords, dtype=np.float64)
        if coords.ndim == 2:
            coords = coords[None]
        if coords.ndim != 3 or coords.shape[2] != 3:
            raise TopologyMismatch(f"ensemble coordinates must be (s, n, 3), got {coords.shape}")
        if voxel_scale is not None:
            voxel_scale = np.asarray(voxel_scale, dtype=np.float64).reshape(-1)
            if len(voxel_scale) != len(coords):
                raise TopologyMismatch(f"{len(voxel_scale)} voxel scales for {len(coords)} subjects")
            coords = coords * voxel_scale[:, None, None]
        if subject_ids is None:
            subject_ids = [f"subject_{i}" for i in range(len(coords))]
        if len(subject_ids) != len(coords):
            raise TopologyMismatch(f"{len(subject_ids)} ids for {len(coords)} subjects")
        if len(coords) > 0:
            # one check covers every subject: n and faces are shared
            Tri_Mesh(coords[0], faces)
        coords.flags.writeable = False
        self._coords = coords
        self._faces = np.array(faces, dtype=np.int64).reshape(-1, 3)
        self._faces.flags.writeable = False
        self.subject_ids = [str(s) for s in subject_ids]
        self.voxel_scale = voxel_scale

    @classmethod
    def from_meshes(cls, meshes: Sequence[Tri_Mesh], subject_ids=None, voxel_scale=None) -> "Surface_Ensemble":
        if len(meshes) == 0:
            raise EmptyEnsemble("no subject meshes given")
        faces = meshes[0].faces
        for i, mesh in enumerate(meshes[1:], start=1):
            if mesh.n_vertices != meshes[0].n_vertices or not np.array_equal(mesh.faces, faces):
                raise TopologyMismatch(f"subject {i} does not share the connectivity of subject 0")
        return cls(np.stack([m.vertices for m in meshes]), faces, subject_ids, voxel_scale)

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    @property
    def faces(self) -> np.ndarray:
        return self._faces

    @property
    def n_subjects(self) -> int:
        return self._coords.shape[0]

    @property
    def n_vertices(self) -> int:
        return self._coords.shape[1]

    def subject_mesh(self, subject: int) -> Tri_Mesh:
        return Tri_Mesh(self._coords[subject], self._faces)

    def index_of(self, subject) -> int:
        """Subject position from an integer index or a subject id."""
        if isinstance(subject, str) and subject in self.subject_ids:
            return self.subject_ids.index(subject)
        index = int(subject)
        if not 0 <= index < self.n_subjects:
            raise EnsembleFormatError(f"subject index {index} outside 0..{self.n_subjects - 1}")
        return index

    def __len__(self):
        return self.n_subjects


def read_ensemble_manifest(path: str):
    """Rows (subject_id, mesh path, voxel_scale) of an ensemble manifest
    CSV. Mesh paths are relative to the manifest's directory.

    """
    try:
        with open(path, "r", newline="") as f:
            text = f.read()
    except OSError as e:
        raise StorageError(f"could not read {path}: {e}") from e
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows or [c.strip().lower() for c in rows[0]] != ["subject_id", "path", "voxel_scale"]:
        raise EnsembleFormatError("ensemble manifest must start with subject_id,path,voxel_scale", index=1)
    base = os.path.dirname(os.path.abspath(path))
    entries = []
    for n, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise EnsembleFormatError(f"expected 3 columns, got {len(row)}", index=n)
        try:
            scale = float(row[2]) if row[2].strip() else 1.0
        except ValueError as e:
            raise EnsembleFormatError(f"bad voxel scale '{row[2]}'", index=n) from e
        entries.append((row[0].strip(), os.path.join(base, row[1].strip()), scale))
    return entries


def pack_ensemble(ens: Surface_Ensemble) -> bytes:
    """NGEN1 bytes: magic, then s, n, m as little-endian uint64, the m x 3
    faces as little-endian int64 and the coordinates subject-major as
    little-endian float64. Subject ids are not stored.

    """
    head = np.array([ens.n_subjects, ens.n_vertices, len(ens.faces)], dtype="<u8")
    return (
        PACKED_MAGIC
        + head.tobytes()
        + ens.faces.astype("<i8").tobytes()
        + ens.coords.astype("<f8").tobytes()
    )


def unpack_ensemble(raw: bytes) -> Surface_Ensemble:
    if raw[: len(PACKED_MAGIC)] != PACKED_MAGIC:
        raise EnsembleFormatError("missing NGEN1 magic")
    offset = len(PACKED_MAGIC)
    if len(raw) < offset + 24:
        raise EnsembleFormatError("packed ensemble header is truncated")
    s, n, m = (int(v) for v in np.frombuffer(raw, dtype="<u8", count=3, offset=offset))
    offset += 24
    expected = offset + 8 * 3 * m + 8 * 3 * n * s
    if len(raw) != expected:
        raise EnsembleFormatError(f"packed ensemble holds {len(raw)} bytes, header implies {expected}")
    faces = np.frombuffer(raw, dtype="<i8", count=3 * m, offset=offset).reshape(m, 3)
    offset += 8 * 3 * m
    coords = np.frombuffer(raw, dtype="<f8", count=3 * n * s, offset=offset).reshape(s, n, 3)
    if s == 0:
        raise EmptyEnsemble("packed ensemble has no subjects")
    return Surface_Ensemble(coords.astype(np.float64), faces.astype(np.int64))


def write_packed_ensemble(ens: Surface_Ensemble, path: str) -> str:
    atomic_write(path, pack_ensemble(ens))
    NG_config.ng_logger.info(f"saved {ens.n_subjects} subjects to {path}")
    return path


def load_ensemble(path: str) -> Surface_Ensemble:
    """Ensemble from a packed NGEN1 file or a subject manifest CSV."""
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as e:
        raise StorageError(f"could not read {path}: {e}") from e
    if raw.startswith(PACKED_MAGIC):
        ens = unpack_ensemble(raw)
    else:
        entries = read_ensemble_manifest(path)
        if not entries:
            raise EmptyEnsemble(f"manifest {path} lists no subjects")
        meshes = [
            read_ply(mesh_path)[0]
            for _, mesh_path, _ in tqdm(entries, desc="loading subjects", disable=len(entries) < 10)
        ]
        ens = Surface_Ensemble.from_meshes(
            meshes,
            subject_ids=[e[0] for e in entries],
            voxel_scale=[e[2] for e in entries],
        )
    NG_config.ng_logger.info(
        f"ensemble of {ens.n_subjects} subjects, {ens.n_vertices} vertices each"
    )
    return ens
