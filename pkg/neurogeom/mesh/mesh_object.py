import numpy as np

from ..errors import TopologyMismatch

__all__ = ["Tri_Mesh"]


class Tri_Mesh(object):
    """Indexed triangle mesh.

    Parameters:
        vertices: (n, 3) vertex coordinates in mm
        faces: (m, 3) vertex index triples, counterclockwise seen from outside

    Every face index must be a valid vertex index and no face may repeat a
    vertex. Unreferenced vertices are allowed but reported by
    ``unreferenced_count``.
    """

    def __init__(self, vertices, faces) -> None:
        vertices = np.array(vertices, dtype=np.float64).reshape(-1, 3)
        faces = np.array(faces, dtype=np.int64).reshape(-1, 3)
        if faces.size > 0:
            if faces.min() < 0 or faces.max() >= len(vertices):
                raise TopologyMismatch(
                    f"face index out of range for {len(vertices)} vertices"
                )
            if np.any(
                (faces[:, 0] == faces[:, 1])
                | (faces[:, 1] == faces[:, 2])
                | (faces[:, 2] == faces[:, 0])
            ):
                raise TopologyMismatch("a face repeats a vertex index")
        vertices.flags.writeable = False
        faces.flags.writeable = False
        self._vertices = vertices
        self._faces = faces

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @property
    def faces(self) -> np.ndarray:
        return self._faces

    @property
    def n_vertices(self) -> int:
        return len(self._vertices)

    @property
    def n_faces(self) -> int:
        return len(self._faces)

    @property
    def unreferenced_count(self) -> int:
        used = np.zeros(self.n_vertices, dtype=bool)
        used[self._faces.ravel()] = True
        return int(np.sum(~used))

    def copy(self, vertices=None, faces=None) -> "Tri_Mesh":
        return self.__class__(
            self._vertices if vertices is None else vertices,
            self._faces if faces is None else faces,
        )

    def flipped(self) -> "Tri_Mesh":
        """Same surface with every face winding reversed."""
        return self.copy(faces=self._faces[:, [0, 2, 1]])

    def compact(self) -> "Tri_Mesh":
        """Drop unreferenced vertices, keeping the relative vertex order."""
        used = np.unique(self._faces.ravel())
        if len(used) == self.n_vertices:
            return self
        remap = np.full(self.n_vertices, -1, dtype=np.int64)
        remap[used] = np.arange(len(used))
        return self.__class__(self._vertices[used], remap[self._faces])

    def signed_volume(self) -> float:
        """Enclosed volume, positive for a closed outward oriented mesh."""
        v0 = self._vertices[self._faces[:, 0]]
        v1 = self._vertices[self._faces[:, 1]]
        v2 = self._vertices[self._faces[:, 2]]
        return float(np.sum(np.einsum("ij,ij->i", v0, np.cross(v1, v2))) / 6.0)

    def __eq__(self, other):
        if not isinstance(other, Tri_Mesh):
            return NotImplemented
        return np.array_equal(self._vertices, other._vertices) and np.array_equal(
            self._faces, other._faces
        )

    def __str__(self):
        return f"triangle mesh with {self.n_vertices} vertices and {self.n_faces} faces"
