from typing import List, Sequence

import numpy as np

from .ensemble_object import Surface_Ensemble
from ..mesh import Tri_Mesh, write_ply
from ..imgio import load_volume
from ..errors import EmptyEnsemble, TopologyMismatch, SizeMismatch, DimsMismatch
from .. import NG_config

__all__ = [
    "Displacement_Field",
    "average_template",
    "displacement_field",
    "displacement_fields",
    "mean_displacement_length",
    "export_scalar_mesh",
    "load_displacement_volumes",
]


class Displacement_Field(object):
    """Per-vertex (or per-voxel) displacement vectors in mm and their lengths.

    ``dims`` is set when the vectors come from a voxel grid, in which case
    they are listed with x varying fastest.

    """

    def __init__(self, vectors, dims=None) -> None:
        vectors = np.array(vectors, dtype=np.float64).reshape(-1, 3)
        vectors.flags.writeable = False
        self._vectors = vectors
        self._lengths = np.linalg.norm(vectors, axis=1)
        self._lengths.flags.writeable = False
        self.dims = None if dims is None else tuple(dims)

    @property
    def vectors(self) -> np.ndarray:
        return self._vectors

    @property
    def lengths(self) -> np.ndarray:
        return self._lengths

    def __len__(self):
        return len(self._vectors)


def average_template(ens: Surface_Ensemble) -> Tri_Mesh:
    """Vertex-wise arithmetic mean of the subjects, with the shared faces."""
    if ens.n_subjects == 0:
        raise EmptyEnsemble("cannot average an empty ensemble")
    return Tri_Mesh(ens.coords.mean(axis=0), ens.faces)


def _check_template(ens: Surface_Ensemble, template: Tri_Mesh) -> None:
    if template.n_vertices != ens.n_vertices:
        raise TopologyMismatch(
            f"template has {template.n_vertices} vertices, ensemble {ens.n_vertices}"
        )
    if not np.array_equal(template.faces, ens.faces):
        raise TopologyMismatch("template faces differ from the ensemble connectivity")


def displacement_field(ens: Surface_Ensemble, template: Tri_Mesh, subject) -> Displacement_Field:
    """Vectors moving each template vertex onto its counterpart in ``subject``."""
    _check_template(ens, template)
    index = ens.index_of(subject)
    return Displacement_Field(ens.coords[index] - template.vertices)


def displacement_fields(ens: Surface_Ensemble, template: Tri_Mesh) -> List[Displacement_Field]:
    """The s x n x 3 displacements of every subject from ``template``."""
    _check_template(ens, template)
    return [Displacement_Field(c - template.vertices) for c in ens.coords]


def mean_displacement_length(fields: Sequence[Displacement_Field]) -> np.ndarray:
    """Per-vertex displacement length averaged over subjects."""
    if len(fields) == 0:
        raise EmptyEnsemble("no displacement fields to average")
    return np.mean(np.stack([f.lengths for f in fields]), axis=0)


def export_scalar_mesh(mesh: Tri_Mesh, scalar, path: str, extra=None) -> str:
    """Write ``mesh`` as PLY with ``scalar`` in the per-vertex ``quality``
    property, ready for an external surface viewer.

    """
    scalar = np.asarray(scalar, dtype=np.float64).reshape(-1)
    if len(scalar) != mesh.n_vertices:
        raise SizeMismatch(f"{len(scalar)} scalars for {mesh.n_vertices} vertices")
    scalars = {"quality": scalar}
    if extra:
        scalars.update(extra)
    return write_ply(mesh, path, scalars)


def load_displacement_volumes(x_path: str, y_path: str, z_path: str) -> Displacement_Field:
    """Voxelwise displacement field whose components are stored in three
    separate volumes.

    """
    components = [load_volume(p) for p in (x_path, y_path, z_path)]
    dims = components[0].shape3d
    for vol in components[1:]:
        if vol.shape3d != dims or vol.voxel_size != components[0].voxel_size:
            raise DimsMismatch("displacement component volumes differ in geometry")
    vectors = np.stack(
        [np.asarray(v.array3d, dtype=np.float64).ravel(order="F") for v in components], axis=1
    )
    field = Displacement_Field(vectors, dims=dims)
    NG_config.ng_logger.info(
        f"displacement volumes {dims}: mean length {float(field.lengths.mean()):.6g} mm"
    )
    return field
