import os
from typing import Dict, Optional, Tuple

import numpy as np

from .mesh_object import Tri_Mesh
from ..errors import MeshFormatError, SizeMismatch, StorageError
from ..utils.operations import atomic_write
from .. import NG_config

__all__ = [
    "format_ply",
    "parse_ply",
    "format_obj",
    "parse_obj",
    "write_ply",
    "read_ply",
    "write_obj",
    "read_obj",
    "load_mesh",
    "save_mesh",
]


def _fmt(value) -> str:
    return "%.6g" % value


def format_ply(mesh: Tri_Mesh, scalars: Optional[Dict[str, np.ndarray]] = None) -> str:
    """ASCII PLY text for ``mesh``. Each entry of ``scalars`` becomes an
    extra per-vertex float property, in the order given.

    """
    scalars = {} if scalars is None else scalars
    columns = [mesh.vertices]
    for name, values in scalars.items():
        values = np.asarray(values, dtype=np.float64).reshape(-1)
        if len(values) != mesh.n_vertices:
            raise SizeMismatch(
                f"scalar '{name}' has {len(values)} values for {mesh.n_vertices} vertices"
            )
        columns.append(values[:, None])
    table = np.hstack(columns)

    lines = [
        "ply",
        "format ascii 1.0",
        "comment neurogeom",
        f"element vertex {mesh.n_vertices}",
        "property float x",
        "property float y",
        "property float z",
    ]
    lines += [f"property float {name}" for name in scalars]
    lines += [
        f"element face {mesh.n_faces}",
        "property list uchar int vertex_indices",
        "end_header",
    ]
    lines += [" ".join(_fmt(v) for v in row) for row in table]
    lines += ["3 %d %d %d" % tuple(face) for face in mesh.faces]
    return "\n".join(lines) + "\n"


def parse_ply(text: str) -> Tuple[Tri_Mesh, Dict[str, np.ndarray]]:
    """Parse ASCII PLY text into a mesh and its extra vertex properties."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != "ply":
        raise MeshFormatError("missing 'ply' signature", index=1)

    elements = []
    current = None
    body_start = None
    for n, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if not tokens or tokens[0] in ("comment", "obj_info"):
            continue
        if tokens[0] == "format":
            if len(tokens) < 2 or tokens[1] != "ascii":
                raise MeshFormatError(f"unsupported PLY format {' '.join(tokens[1:])}", index=n)
        elif tokens[0] == "element":
            if len(tokens) != 3 or not tokens[2].isdigit():
                raise MeshFormatError("malformed element line", index=n)
            current = {"name": tokens[1], "count": int(tokens[2]), "props": []}
            elements.append(current)
        elif tokens[0] == "property":
            if current is None:
                raise MeshFormatError("property before any element", index=n)
            current["props"].append(tokens[-1] if tokens[1] != "list" else "list")
        elif tokens[0] == "end_header":
            body_start = n
            break
        else:
            raise MeshFormatError(f"unexpected header line '{line}'", index=n)
    if body_start is None:
        raise MeshFormatError("missing end_header")

    vertices = np.zeros((0, 3))
    faces = np.zeros((0, 3), dtype=np.int64)
    scalars = {}
    row = body_start
    for element in elements:
        block = lines[row : row + element["count"]]
        if len(block) < element["count"]:
            raise MeshFormatError(f"file ends inside element '{element['name']}'", index=row + len(block))
        if element["name"] == "vertex":
            try:
                table = np.array([[float(t) for t in b.split()] for b in block], dtype=np.float64)
            except ValueError as e:
                raise MeshFormatError(f"non-numeric vertex value: {e}") from e
            table = table.reshape(len(block), -1)
            if table.shape[1] != len(element["props"]):
                raise MeshFormatError("vertex rows do not match the declared properties", index=row + 1)
            props = element["props"]
            if not all(p in props for p in "xyz"):
                raise MeshFormatError("vertex element lacks x, y, z")
            vertices = table[:, [props.index("x"), props.index("y"), props.index("z")]]
            for i, name in enumerate(props):
                if name not in ("x", "y", "z"):
                    scalars[name] = table[:, i]
        elif element["name"] == "face":
            faces = np.zeros((len(block), 3), dtype=np.int64)
            for i, b in enumerate(block):
                tokens = b.split()
                if not tokens or tokens[0] != "3" or len(tokens) != 4:
                    raise MeshFormatError("only triangular faces are supported", index=row + i + 1)
                try:
                    faces[i] = [int(t) for t in tokens[1:]]
                except ValueError as e:
                    raise MeshFormatError(f"bad face index: {e}", index=row + i + 1) from e
        row += element["count"]

    return Tri_Mesh(vertices, faces), scalars


def format_obj(mesh: Tri_Mesh) -> str:
    lines = ["v " + " ".join(_fmt(c) for c in v) for v in mesh.vertices]
    lines += ["f %d %d %d" % tuple(f + 1) for f in mesh.faces]
    return "\n".join(lines) + "\n"


def parse_obj(text: str) -> Tri_Mesh:
    vertices = []
    faces = []
    for n, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        if tokens[0] == "v":
            if len(tokens) < 4:
                raise MeshFormatError("a vertex needs three coordinates", index=n)
            try:
                vertices.append([float(t) for t in tokens[1:4]])
            except ValueError as e:
                raise MeshFormatError(f"bad vertex: {e}", index=n) from e
        elif tokens[0] == "f":
            if len(tokens) != 4:
                raise MeshFormatError("only triangular faces are supported", index=n)
            # v/vt/vn references keep only the vertex index
            try:
                faces.append([int(t.split("/")[0]) - 1 for t in tokens[1:]])
            except ValueError as e:
                raise MeshFormatError(f"bad face index: {e}", index=n) from e
    return Tri_Mesh(vertices, faces)


def _read_text(path: str) -> str:
    try:
        with open(path, "r") as f:
            return f.read()
    except OSError as e:
        raise StorageError(f"could not read {path}: {e}") from e


def write_ply(mesh: Tri_Mesh, path: str, scalars=None) -> str:
    atomic_write(path, format_ply(mesh, scalars))
    NG_config.ng_logger.info(f"saved {path}: {mesh}")
    return path


def read_ply(path: str) -> Tuple[Tri_Mesh, Dict[str, np.ndarray]]:
    mesh, scalars = parse_ply(_read_text(path))
    NG_config.ng_logger.info(f"loaded {path}: {mesh}")
    return mesh, scalars


def write_obj(mesh: Tri_Mesh, path: str) -> str:
    atomic_write(path, format_obj(mesh))
    NG_config.ng_logger.info(f"saved {path}: {mesh}")
    return path


def read_obj(path: str) -> Tri_Mesh:
    mesh = parse_obj(_read_text(path))
    NG_config.ng_logger.info(f"loaded {path}: {mesh}")
    return mesh


def load_mesh(path: str) -> Tri_Mesh:
    """Mesh from a ``.ply`` or ``.obj`` file, chosen by suffix."""
    if os.path.splitext(path)[1].lower() == ".obj":
        return read_obj(path)
    return read_ply(path)[0]


def save_mesh(mesh: Tri_Mesh, path: str, scalars=None) -> str:
    if os.path.splitext(path)[1].lower() == ".obj":
        return write_obj(mesh, path)
    return write_ply(mesh, path, scalars)
