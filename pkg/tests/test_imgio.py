import os
import unittest
import tempfile

import numpy as np

import neurogeom as ng

######################################################################
# Image volumes
######################################################################

DATATYPES = ["uint8", "int16", "int32", "float32", "float64"]


def raw_analyze_header(dims, datatype = 2, bitpix = 8, voxel_size = (1., 1., 1.), order = "<", sizeof_hdr = 348):
    """Analyze header bytes laid out by hand, independent of the codec."""
    raw = bytearray(348)
    raw[0:4] = np.array([sizeof_hdr], dtype = order + "i4").tobytes()
    dim = np.ones(8, dtype = order + "i2")
    dim[0] = 4
    dim[1:1 + len(dims)] = dims
    raw[40:56] = dim.tobytes()
    raw[70:72] = np.array([datatype], dtype = order + "i2").tobytes()
    raw[72:74] = np.array([bitpix], dtype = order + "i2").tobytes()
    pixdim = np.zeros(8, dtype = order + "f4")
    pixdim[1:4] = voxel_size
    raw[76:108] = pixdim.tobytes()
    return bytes(raw)


class TestVolumeHeader(unittest.TestCase):

    def test_fixture_dims(self):

        header = ng.imgio.read_analyze_header(raw_analyze_header((191, 236, 171, 1)))
        self.assertEqual(header.dims, (191, 236, 171, 1), "header should parse to the stored dims")
        self.assertEqual(header.datatype_name, "uint8", "datatype code 2 is uint8")
        self.assertEqual(header.endianness, "little", "sizeof_hdr read little endian")

    def test_big_endian_detection(self):

        header = ng.imgio.read_analyze_header(
            raw_analyze_header((4, 5, 6), datatype = 16, bitpix = 32, voxel_size = (0.9375, 0.9375, 1.5), order = ">")
        )
        self.assertEqual(header.endianness, "big", "sizeof_hdr only reads 348 big endian")
        self.assertEqual(header.dims, (4, 5, 6, 1), "missing fourth dim defaults to 1")
        self.assertEqual(header.voxel_size, (0.9375, 0.9375, 1.5), "pixdim should be decoded")

    def test_header_errors(self):

        with self.assertRaises(ng.errors.HeaderTooShort, msg = "short header should be rejected"):
            ng.imgio.read_analyze_header(b"\x00" * 100)
        with self.assertRaises(ng.errors.BadMagicSize, msg = "sizeof_hdr other than 348 should be rejected"):
            ng.imgio.read_analyze_header(raw_analyze_header((2, 2, 2), sizeof_hdr = 540))
        with self.assertRaises(ng.errors.UnsupportedDatatype, msg = "complex datatype is unsupported"):
            ng.imgio.read_analyze_header(raw_analyze_header((2, 2, 2), datatype = 32, bitpix = 64))
        self.assertEqual(ng.errors.HeaderTooShort.exit_code, 2, "header errors are parse errors")

    def test_payload_size(self):

        header = ng.imgio.read_analyze_header(raw_analyze_header((2, 2, 2), datatype = 4, bitpix = 16))
        with self.assertRaises(ng.errors.PayloadSizeMismatch, msg = "payload short by one voxel should fail"):
            ng.imgio.read_analyze_volume(header, b"\x00" * 14)

    def test_info(self):

        header = ng.imgio.Volume_Header((191, 236, 171, 1), voxel_size = (1, 1, 1.2))
        keys = [key for key, _ in header.info()]
        self.assertEqual(keys, ["format", "endianness", "dims", "voxel_size", "datatype", "bitpix", "description"], "info order is stable")
        self.assertIn("dims: 191 236 171 1", str(header), "dims render space separated")


class TestVolume3D(unittest.TestCase):

    def test_flat_order(self):

        array = np.arange(2*3*4, dtype = np.int16).reshape((2, 3, 4))
        vol = ng.imgio.Volume3D.from_array(array)
        self.assertEqual(vol.dims, (2, 3, 4, 1), "3D arrays get nt = 1")
        for i, j, k in ((0, 0, 0), (1, 2, 3), (1, 0, 2), (0, 1, 1)):
            self.assertEqual(vol.flat[i + 2*(j + 3*k)], array[i, j, k], "x should vary fastest in flat order")
            self.assertEqual(vol.flat_index(i, j, k), i + 2*(j + 3*k), "flat index formula")
            self.assertEqual(vol.voxel(i, j, k), array[i, j, k], "voxel access by index")

    def test_immutable_and_pad(self):

        vol = ng.imgio.Volume3D.from_array(np.ones((2, 2, 2), dtype = np.uint8))
        with self.assertRaises(ValueError, msg = "volume data should be read only"):
            vol.data[0, 0, 0, 0] = 5
        padded = vol.pad(1)
        self.assertEqual(padded.shape3d, (4, 4, 4), "padding adds width on both sides")
        self.assertEqual(int(padded.data.sum()), 8, "padding only adds zeros")
        self.assertEqual(padded.voxel(0, 0, 0), 0, "pad corner is zero")


class TestCodecs(unittest.TestCase):

    def test_random_round_trip(self):

        np.random.seed(12345)
        for n in range(200):
            datatype = DATATYPES[n % 5]
            endianness = "little" if (n // 5) % 2 == 0 else "big"
            dims = tuple(np.random.randint(1, 17, size = 3)) + (int(np.random.randint(1, 3)),)
            if datatype.startswith("float"):
                array = np.random.normal(scale = 100, size = dims)
            else:
                info = np.iinfo(datatype)
                array = np.random.randint(max(info.min, -30000), min(info.max, 30000), size = dims)
            voxel_size = tuple(np.random.uniform(0.5, 3, size = 3))
            vol = ng.imgio.Volume3D.from_array(array, voxel_size = voxel_size, datatype = datatype, endianness = endianness, description = f"case {n}")

            hdr_bytes, img_bytes = ng.imgio.write_analyze(vol)
            self.assertEqual(len(hdr_bytes), 348, "analyze header is 348 bytes")
            back = ng.imgio.read_analyze_volume(ng.imgio.read_analyze_header(hdr_bytes), img_bytes)
            self.assertEqual(back, vol, f"analyze round trip case {n} should be exact")
            self.assertEqual(ng.imgio.write_analyze(back), (hdr_bytes, img_bytes), f"analyze rewrite case {n} should be byte identical")

            nvol = vol.with_data(vol.data, format = "Nifti1")
            nback = ng.imgio.read_nifti1(ng.imgio.write_nifti1(nvol))
            self.assertEqual(nback, nvol, f"nifti round trip case {n} should be exact")

    def test_nifti_layout(self):

        vol = ng.imgio.Volume3D.from_array(np.arange(8, dtype = np.float32).reshape((2, 2, 2)), format = "Nifti1")
        raw = ng.imgio.write_nifti1(vol)
        self.assertEqual(raw[344:348], b"n+1\x00", "single file magic")
        self.assertEqual(len(raw), 352 + 8*4, "data should start at vox_offset 352")
        broken = raw[:344] + b"ni1\x00" + raw[348:]
        with self.assertRaises(ng.errors.BadMagic, msg = "pair magic in a single file should fail"):
            ng.imgio.read_nifti1(broken)

    def test_files(self):

        vol = ng.imgio.Volume3D.from_array(np.arange(18, dtype = np.int32).reshape((3, 3, 2)), voxel_size = (1, 2, 3))
        with tempfile.TemporaryDirectory() as tmp:
            prefix = os.path.join(tmp, "subject")
            hdr_path, img_path = ng.imgio.save_volume(vol, prefix)
            self.assertTrue(os.path.exists(hdr_path) and os.path.exists(img_path), "analyze pair written")
            self.assertEqual(ng.imgio.load_volume(prefix), vol, "load by prefix")
            self.assertEqual(ng.imgio.load_volume(img_path), vol, "load by image path")
            self.assertEqual(sorted(os.listdir(tmp)), ["subject.hdr", "subject.img"], "no temporary files left behind")

            nii = os.path.join(tmp, "subject.nii")
            ng.imgio.save_volume(vol.with_data(vol.data, format = "Nifti1"), nii)
            self.assertEqual(ng.imgio.load_volume(nii).data.tobytes(), vol.data.tobytes(), "nifti file round trip")

            with self.assertRaises(ng.errors.StorageError, msg = "missing file is an I/O error"):
                ng.imgio.load_volume(os.path.join(tmp, "missing.hdr"))


if __name__ == "__main__":
    unittest.main()
