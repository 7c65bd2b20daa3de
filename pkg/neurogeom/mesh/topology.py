from typing import Optional, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .mesh_object import Tri_Mesh
from ..errors import OddChiForClosed
from .. import NG_config

__all__ = ["Topology_Report", "enumerate_edges", "euler_characteristic", "validate"]


class Topology_Report(object):
    """Counts and defect tallies of a triangle mesh.

    ``genus`` is only set for closed, connected meshes, where
    chi = 2 - 2 * genus.
    """

    fields = (
        "V",
        "E",
        "F",
        "chi",
        "boundary_edges",
        "nonmanifold_edges",
        "components",
        "isolated_vertices",
        "genus",
        "is_sphere",
    )

    def __init__(
        self,
        V: int,
        E: int,
        F: int,
        boundary_edges: int,
        nonmanifold_edges: int,
        components: int,
        isolated_vertices: int = 0,
        genus: Optional[int] = None,
    ) -> None:
        self.V = int(V)
        self.E = int(E)
        self.F = int(F)
        self.chi = self.V - self.E + self.F
        self.boundary_edges = int(boundary_edges)
        self.nonmanifold_edges = int(nonmanifold_edges)
        self.components = int(components)
        self.isolated_vertices = int(isolated_vertices)
        self.genus = genus

    @property
    def is_closed(self) -> bool:
        return self.boundary_edges == 0 and self.nonmanifold_edges == 0

    @property
    def is_manifold(self) -> bool:
        return self.nonmanifold_edges == 0

    @property
    def is_sphere(self) -> bool:
        return self.is_closed and self.components == 1 and self.chi == 2

    @property
    def edges_match_faces(self) -> bool:
        """2E = 3F, which holds for every closed triangle mesh."""
        return 2 * self.E == 3 * self.F

    @property
    def faces_match_vertices(self) -> bool:
        """F = 2V - 4, which holds exactly for closed genus zero meshes."""
        return self.F == 2 * self.V - 4

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.fields}

    def as_text(self) -> str:
        lines = []
        for name in self.fields:
            value = getattr(self, name)
            if value is None:
                value = "n/a"
            elif isinstance(value, bool):
                value = "true" if value else "false"
            lines.append(f"{name}: {value}")
        return "\n".join(lines)

    def __str__(self):
        return self.as_text()


def enumerate_edges(mesh: Tri_Mesh) -> Tuple[np.ndarray, np.ndarray]:
    """Distinct undirected edges and how many faces use each.

    Returns:
        edges: (E, 2) vertex pairs with the smaller index first, sorted
        counts: (E,) number of incident faces per edge
    """
    if mesh.n_faces == 0:
        return np.zeros((0, 2), dtype=np.int64), np.zeros(0, dtype=np.int64)
    pairs = mesh.faces[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2)
    pairs = np.sort(pairs, axis=1)
    edges, counts = np.unique(pairs, axis=0, return_counts=True)
    return edges, counts


def euler_characteristic(mesh: Tri_Mesh) -> int:
    """V - E + F."""
    edges, _ = enumerate_edges(mesh)
    return mesh.n_vertices - len(edges) + mesh.n_faces


def _count_components(n_vertices: int, edges: np.ndarray) -> int:
    if n_vertices == 0:
        return 0
    graph = sparse.coo_matrix(
        (np.ones(len(edges), dtype=np.int8), (edges[:, 0], edges[:, 1])),
        shape=(n_vertices, n_vertices),
    )
    n, _ = csgraph.connected_components(graph, directed=False)
    return int(n)


def validate(mesh: Tri_Mesh) -> Topology_Report:
    """Full topology report for ``mesh``.

    Components are counted over the vertex-face incidence graph, an
    unreferenced vertex being a component of its own. Duplicate faces
    count separately and therefore show up as nonmanifold edges.

    """
    edges, counts = enumerate_edges(mesh)
    report = Topology_Report(
        V=mesh.n_vertices,
        E=len(edges),
        F=mesh.n_faces,
        boundary_edges=np.sum(counts == 1),
        nonmanifold_edges=np.sum(counts >= 3),
        components=_count_components(mesh.n_vertices, edges),
        isolated_vertices=mesh.unreferenced_count,
    )
    if report.is_closed:
        if report.chi % 2 != 0:
            raise OddChiForClosed(
                f"closed mesh has odd Euler characteristic {report.chi}; connectivity is corrupt"
            )
        if report.components == 1 and report.chi <= 2:
            report.genus = (2 - report.chi) // 2
    else:
        NG_config.ng_logger.debug(
            f"open mesh: {report.boundary_edges} boundary and {report.nonmanifold_edges} nonmanifold edges"
        )
    return report
