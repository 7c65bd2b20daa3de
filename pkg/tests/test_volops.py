import unittest
import itertools
from collections import deque

import numpy as np

import neurogeom as ng
from utils import make_ball_mask, make_tunnel_block, gaussian_sample_volume

######################################################################
# Masks and volumetry
######################################################################

class TestBinaryMask(unittest.TestCase):

    def test_flat_dims(self):

        bits = np.zeros(24, dtype = np.uint8)
        bits[[0, 5, 23]] = 7
        mask = ng.volops.Binary_Mask(bits, dims = (2, 3, 4))
        self.assertEqual(mask.count, 3, "any nonzero value counts as set")
        self.assertTrue(mask.bits[1, 2, 0], "flat index 5 is (1, 2, 0) with x fastest")
        self.assertTrue(np.array_equal(mask.flat, bits != 0), "flat view matches file order")
        with self.assertRaises(ng.errors.SizeMismatch, msg = "wrong bit count should fail"):
            ng.volops.Binary_Mask(bits[:-1], dims = (2, 3, 4))

    def test_volume_round_trip(self):

        mask = make_ball_mask(voxel_size = (1., 1., 2.))
        vol = mask.to_volume()
        self.assertEqual(vol.header.datatype_name, "uint8", "masks are stored as uint8")
        self.assertEqual(ng.volops.Binary_Mask.from_volume(vol), mask, "mask survives conversion to a volume")


class TestVolumetry(unittest.TestCase):

    def test_measure_volume(self):

        mask = make_ball_mask(voxel_size = (0.9375, 0.9375, 1.5))
        count, mm3 = ng.volops.measure_volume(mask)
        self.assertEqual(count, int(mask.bits.sum()), "count is the number of set voxels")
        self.assertAlmostEqual(mm3, count * 0.9375 * 0.9375 * 1.5, places = 9, msg = "volume is count times voxel volume")

        empty = ng.volops.Binary_Mask(np.zeros((3, 3, 3)))
        self.assertEqual(ng.volops.measure_volume(empty), (0, 0.0), "empty mask has zero volume")

    def test_batch(self):

        left = make_ball_mask(radius = 3)
        right = make_ball_mask(radius = 4)
        rows = ng.volops.batch_volumes([left, right], names = ["left", "right"])
        self.assertEqual([r[0] for r in rows], ["left", "right"], "rows follow input order")
        self.assertLess(rows[0][1], rows[1][1], "larger ball has more voxels")


######################################################################
# Components and morphology
######################################################################

def bfs_labels(bits, connectivity):
    """Breadth first labelling visiting voxels in x-fastest order, then
    relabelled by decreasing size with ties on the first flat index."""
    hops = {6: 1, 18: 2, 26: 3}[connectivity]
    offsets = [o for o in itertools.product((-1, 0, 1), repeat = 3) if 0 < np.count_nonzero(o) <= hops]
    nx, ny, nz = bits.shape
    seen = np.zeros(bits.shape, dtype = bool)
    found = []
    for k in range(nz):
        for j in range(ny):
            for i in range(nx):
                if not bits[i, j, k] or seen[i, j, k]:
                    continue
                seen[i, j, k] = True
                voxels = []
                queue = deque([(i, j, k)])
                while queue:
                    v = queue.popleft()
                    voxels.append(v)
                    for o in offsets:
                        w = (v[0] + o[0], v[1] + o[1], v[2] + o[2])
                        if all(0 <= w[a] < bits.shape[a] for a in range(3)) and bits[w] and not seen[w]:
                            seen[w] = True
                            queue.append(w)
                found.append(voxels)
    # discovery order is first flat index order, so a stable sort keeps ties
    found.sort(key = len, reverse = True)
    labels = np.zeros(bits.shape, dtype = np.int32)
    for n, voxels in enumerate(found):
        for v in voxels:
            labels[v] = n + 1
    return labels


class TestComponents(unittest.TestCase):

    def test_matches_breadth_first_search(self):

        rng = np.random.default_rng(2024)
        for trial in range(30):
            shape = tuple(rng.integers(2, 9, size = 3))
            bits = rng.random(shape) < rng.uniform(0.2, 0.6)
            mask = ng.volops.Binary_Mask(bits)
            for connectivity in (6, 18, 26):
                field = ng.volops.connected_components(mask, connectivity)
                expected = bfs_labels(bits, connectivity)
                self.assertTrue(np.array_equal(field.labels, expected), f"labels agree with BFS, trial {trial}, {connectivity}-connectivity")
                self.assertEqual(field.n_components, int(expected.max()), f"component count, trial {trial}")
                for lab, size in field.component_sizes.items():
                    self.assertEqual(size, int(np.sum(expected == lab)), f"size of component {lab}, trial {trial}")

    def test_ordering(self):

        bits = np.zeros((8, 8, 8), dtype = bool)
        bits[0, 0, 0] = True            # size 1, first in flat order
        bits[4:6, 4:6, 4:6] = True      # size 8
        bits[1, 7, 7] = True            # size 1, later in flat order
        field = ng.volops.connected_components(ng.volops.Binary_Mask(bits))
        self.assertEqual(field.n_components, 3, "three separate components")
        self.assertEqual(field.component_sizes[1], 8, "label 1 is the largest component")
        self.assertEqual(field.labels[0, 0, 0], 2, "size tie broken by the first flat index")
        self.assertEqual(field.labels[1, 7, 7], 3, "later voxel gets the later label")
        self.assertEqual(field.labels[2, 2, 2], 0, "background stays 0")

    def test_connectivity(self):

        bits = np.zeros((3, 3, 3), dtype = bool)
        bits[0, 0, 0] = True
        bits[1, 1, 0] = True
        bits[2, 2, 1] = True
        mask = ng.volops.Binary_Mask(bits)
        self.assertEqual(ng.volops.connected_components(mask, 6).n_components, 3, "no face neighbours")
        self.assertEqual(ng.volops.connected_components(mask, 18).n_components, 2, "edge neighbours join the first pair")
        self.assertEqual(ng.volops.connected_components(mask, 26).n_components, 1, "corner neighbours join all")
        with self.assertRaises(ng.errors.UsageError, msg = "connectivity 8 is not a 3D adjacency"):
            ng.volops.connected_components(mask, 8)

    def test_largest_component(self):

        mask = make_tunnel_block()
        largest = ng.volops.largest_component(mask)
        self.assertEqual(largest.count, mask.count - 1, "speckle should be removed")
        self.assertFalse(largest.bits[1, 1, 1], "speckle voxel cleared")
        with self.assertRaises(ng.errors.EmptyMask, msg = "empty mask has no largest component"):
            ng.volops.largest_component(ng.volops.Binary_Mask(np.zeros((4, 4, 4))))


class TestMorphology(unittest.TestCase):

    def test_closing_properties(self):

        np.random.seed(12345)
        mask = ng.volops.Binary_Mask(np.random.uniform(size = (12, 12, 12)) > 0.7)
        closed = ng.volops.morphological_close(mask, 1)
        self.assertTrue(np.all(closed.bits[mask.bits]), "closing is extensive")
        again = ng.volops.morphological_close(closed, 1)
        self.assertEqual(again, closed, "closing is idempotent")

    def test_closing_fills_tunnel(self):

        mask = make_tunnel_block(speckle = False)
        closed = ng.volops.morphological_close(mask, 1)
        self.assertTrue(closed.bits[5, 5, 5], "centre of the tunnel is filled")
        self.assertFalse(closed.bits[0, 0, 0], "background far from the block stays clear")

    def test_closing_edge_cases(self):

        empty = ng.volops.Binary_Mask(np.zeros((4, 4, 4)))
        self.assertEqual(ng.volops.morphological_close(empty, 2), empty, "empty mask is unchanged")
        with self.assertRaises(ng.errors.UsageError, msg = "radius 0 is not allowed"):
            ng.volops.morphological_close(empty, 0)

    def test_fix_topology(self):

        fixed = ng.volops.fix_topology(make_tunnel_block(), radius = 1)
        self.assertFalse(fixed.bits[1, 1, 1], "speckle removed")
        self.assertTrue(fixed.bits[5, 5, 5], "tunnel filled")
        self.assertEqual(ng.volops.connected_components(fixed).n_components, 1, "one component remains")


######################################################################
# Segmentation
######################################################################

class TestSegmentation(unittest.TestCase):

    def test_three_classes(self):

        vol = gaussian_sample_volume()
        result = ng.volops.gmm_segment(vol, K = 3)
        for mean, truth in zip(result.class_means, (30, 110, 200)):
            self.assertLess(abs(mean - truth), 3, f"recovered mean {mean} should be near {truth}")
        self.assertTrue(np.all(np.diff(result.class_means) > 0), "classes ordered by mean")
        total = result.posteriors.sum(axis = 0)
        self.assertLess(np.max(np.abs(total - 1)), 1e-9, "posteriors sum to one per voxel")
        history = np.asarray(result.loglike_history)
        self.assertTrue(np.all(np.diff(history) >= -1e-12 * np.abs(history).max()), "log-likelihood is monotone up to summation rounding")
        self.assertAlmostEqual(float(result.class_weights.sum()), 1., places = 9, msg = "weights sum to one")

    def test_class_volume(self):

        vol = gaussian_sample_volume()
        result = ng.volops.gmm_segment(vol, K = 3)
        out = result.class_volume(0)
        self.assertEqual(out.header.format, "Nifti1", "posterior maps are NIfTI-1")
        self.assertEqual(out.header.datatype_name, "float32", "posterior maps are float32")
        self.assertEqual(out.shape3d, vol.shape3d, "posterior map shares the grid")
        labels = result.hard_labels()
        self.assertEqual(set(np.unique(labels)), {1, 2, 3}, "hard labels run 1..K")

    def test_background_and_single_class(self):

        array = np.zeros((4, 4, 4), dtype = np.float32)
        array[1:3, 1:3, 1:3] = np.arange(1, 9).reshape((2, 2, 2))
        vol = ng.imgio.Volume3D.from_array(array)
        single = ng.volops.gmm_segment(vol, K = 1)
        self.assertTrue(np.all(single.posteriors == 1), "one class owns every voxel")
        self.assertAlmostEqual(single.class_means[0], 4.5, places = 9, msg = "single class mean is the foreground mean")
        self.assertEqual(int(single.foreground.sum()), 8, "only nonzero voxels are fitted")

        with self.assertRaises(ng.errors.NotEnoughVoxels, msg = "an all zero volume has nothing to fit"):
            ng.volops.gmm_segment(ng.imgio.Volume3D.from_array(np.zeros((3, 3, 3), dtype = np.float32)))
        with self.assertRaises(ng.errors.NotEnoughVoxels, msg = "two distinct values cannot carry three classes"):
            ng.volops.gmm_segment(ng.imgio.Volume3D.from_array(np.array([1, 2] * 4, dtype = np.float32).reshape((2, 2, 2))))


if __name__ == "__main__":
    unittest.main()
