from .mesh_object import *
from .mesh_io import *
from .isosurface import *
from .topology import *

"""
mesh_object: Tri_Mesh, an indexed triangle mesh in mm.

mesh_io: ASCII PLY (with per-vertex scalar properties) and OBJ readers and writers.

isosurface: marching cubes extraction from volumes and the image/geometry axis swap.

topology: edge enumeration, Euler characteristic and the closed-surface validation report.
"""
