import numpy as np
import neurogeom as ng


def make_ball_mask(N = 16, radius = 5, centre = 7.5, voxel_size = (1., 1., 1.)):

    X, Y, Z = np.meshgrid(np.arange(N), np.arange(N), np.arange(N), indexing = "ij")
    bits = (X - centre)**2 + (Y - centre)**2 + (Z - centre)**2 <= radius**2
    return ng.volops.Binary_Mask(bits, voxel_size = voxel_size)

def make_torus_mask(N = 24, R = 6, r = 2, centre = 11.5):

    X, Y, Z = np.meshgrid(np.arange(N), np.arange(N), np.arange(N), indexing = "ij")
    rho = np.sqrt((X - centre)**2 + (Y - centre)**2)
    bits = (rho - R)**2 + (Z - centre)**2 <= r**2
    return ng.volops.Binary_Mask(bits)

def make_tunnel_block(N = 11, lo = 3, hi = 7, speckle = True):
    """
    Solid block with a one voxel wide tunnel through its centre along z,
    optionally with a single separate voxel in a corner.
    """
    bits = np.zeros((N, N, N), dtype = bool)
    bits[lo:hi + 1, lo:hi + 1, lo:hi + 1] = True
    mid = (lo + hi) // 2
    bits[mid, mid, lo:hi + 1] = False
    if speckle:
        bits[1, 1, 1] = True
    return ng.volops.Binary_Mask(bits)

def make_tetrahedron():

    vertices = [[0,0,0],[1,0,0],[0,1,0],[0,0,1]]
    faces = [[0,2,1],[0,1,3],[0,3,2],[1,2,3]]
    return ng.mesh.Tri_Mesh(vertices, faces)

def make_grid_torus(n = 8, m = 8, R = 3., r = 1.):

    u, v = np.meshgrid(np.arange(n) * 2*np.pi/n, np.arange(m) * 2*np.pi/m, indexing = "ij")
    vertices = np.stack([
        (R + r*np.cos(v)) * np.cos(u),
        (R + r*np.cos(v)) * np.sin(u),
        r*np.sin(v),
    ], axis = -1).reshape(-1, 3)
    faces = []
    for i in range(n):
        for j in range(m):
            a = i*m + j
            b = ((i + 1) % n)*m + j
            c = ((i + 1) % n)*m + (j + 1) % m
            d = i*m + (j + 1) % m
            faces.append([a, b, c])
            faces.append([a, c, d])
    return ng.mesh.Tri_Mesh(vertices, faces)

def make_icosphere(level = 0, radius = 1.):
    """
    Unit icosahedron subdivided ``level`` times; V = 10 * 4**level + 2.
    """
    t = (1 + np.sqrt(5)) / 2
    vertices = np.array([
        [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
        [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
        [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
    ], dtype = np.float64)
    faces = np.array([
        [0,11,5],[0,5,1],[0,1,7],[0,7,10],[0,10,11],
        [1,5,9],[5,11,4],[11,10,2],[10,7,6],[7,1,8],
        [3,9,4],[3,4,2],[3,2,6],[3,6,8],[3,8,9],
        [4,9,5],[2,4,11],[6,2,10],[8,6,7],[9,8,1],
    ], dtype = np.int64)
    for _ in range(level):
        a, b, c = faces[:,0], faces[:,1], faces[:,2]
        edges = np.sort(np.concatenate([np.stack([a,b],1), np.stack([b,c],1), np.stack([c,a],1)]), axis = 1)
        unique, inverse = np.unique(edges, axis = 0, return_inverse = True)
        inverse = inverse.reshape(-1)
        mids = len(vertices) + inverse.reshape(3, -1)
        vertices = np.concatenate([vertices, (vertices[unique[:,0]] + vertices[unique[:,1]]) / 2])
        ab, bc, ca = mids
        faces = np.concatenate([
            np.stack([a, ab, ca], 1),
            np.stack([b, bc, ab], 1),
            np.stack([c, ca, bc], 1),
            np.stack([ab, bc, ca], 1),
        ])
    vertices = radius * vertices / np.linalg.norm(vertices, axis = 1, keepdims = True)
    return ng.mesh.Tri_Mesh(vertices, faces)

def random_landmarks(k = 24, scale = 50., rand = 12345):

    np.random.seed(rand)
    points = np.random.uniform(-scale, scale, size = (k, 3))
    return ng.register.Landmark_Set(points, [f"L{i}" for i in range(k)])

def random_affine(rand = None, rigid = False):

    if rand is not None:
        np.random.seed(rand)
    Q, _ = np.linalg.qr(np.random.normal(size = (3,3)))
    if np.linalg.det(Q) < 0:
        Q[:,0] *= -1
    if rigid:
        R = Q
    else:
        R = Q @ np.diag(np.random.uniform(0.5, 2., size = 3)) @ np.linalg.qr(np.random.normal(size = (3,3)))[0]
    c = np.random.uniform(-20, 20, size = 3)
    return ng.register.Affine_Transform.from_parts(R, c)

def random_spd(N = 1000, rand = 12345, low = 0.1, high = 3.):

    np.random.seed(rand)
    Q, _ = np.linalg.qr(np.random.normal(size = (N, 3, 3)))
    lam = np.random.uniform(low, high, size = (N, 3))
    return np.einsum("nij,nj,nkj->nik", Q, lam, Q)

def make_tensor_field(dims = (4, 3, 2), rand = 12345):
    """
    Six coefficient arrays of random SPD tensors, with voxel (0,0,0) zero.
    """
    N = int(np.prod(dims))
    D = random_spd(N, rand = rand)
    D[0] = 0
    arrays = [
        D[:, i, j].reshape(dims, order = "F")
        for i, j in ((0,0), (1,1), (2,2), (0,1), (0,2), (1,2))
    ]
    return ng.dti.Tensor_Field.from_arrays(arrays, voxel_size = (2., 2., 2.)), D

def make_tracts(count = 100, rand = 12345, max_points = 30):

    np.random.seed(rand)
    tracts = []
    for i in range(count):
        n = np.random.randint(2, max_points + 1)
        steps = np.random.normal(size = (n, 3))
        steps[np.linalg.norm(steps, axis = 1) < 1e-6] = 1.
        tracts.append(ng.dti.Tract(np.cumsum(steps, axis = 0)))
    return tracts

def gaussian_sample_volume(means = (30, 110, 200), sd = 10, n_per_class = 33334, rand = 12345):

    np.random.seed(rand)
    values = np.concatenate([np.random.normal(m, sd, size = n_per_class) for m in means])
    values = np.clip(values, 1e-3, None)
    np.random.shuffle(values)
    values = values[:100000]
    return ng.imgio.Volume3D.from_array(values.reshape((100, 100, 10)).astype(np.float32))
