import os
import logging
import unittest
import tempfile

import numpy as np

import neurogeom as ng

######################################################################
# Util functions
######################################################################

class TestOperations(unittest.TestCase):

    def test_atomic_write(self):

        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "out.txt")
            ng.utils.atomic_write(path, "first\n")
            ng.utils.atomic_write(path, b"second\n")
            with open(path, "rb") as f:
                self.assertEqual(f.read(), b"second\n", "later write replaces the file")
            self.assertEqual(os.listdir(tmp), ["out.txt"], "no temporary files left behind")
            with self.assertRaises(ng.errors.StorageError, msg = "missing directory"):
                ng.utils.atomic_write(os.path.join(tmp, "missing", "out.txt"), "x")

            umask = os.umask(0o022)
            try:
                ng.utils.atomic_write(os.path.join(tmp, "mode.txt"), "x")
            finally:
                os.umask(umask)
            mode = os.stat(os.path.join(tmp, "mode.txt")).st_mode & 0o777
            self.assertEqual(mode, 0o644, "outputs follow the umask, not the private temporary mode")

    def test_staged_outputs(self):

        with tempfile.TemporaryDirectory() as tmp:
            first = os.path.join(tmp, "a.txt")
            second = os.path.join(tmp, "b.txt")
            with ng.utils.staged_outputs():
                ng.utils.atomic_write(first, "a")
                self.assertFalse(os.path.exists(first), "rename waits for the end of the block")
                with ng.utils.staged_outputs():
                    ng.utils.atomic_write(second, "b")
                self.assertFalse(os.path.exists(second), "inner block hands its files to the outer one")
            self.assertTrue(os.path.exists(first) and os.path.exists(second), "both committed together")

            with self.assertRaises(ValueError, msg = "error inside the block propagates"):
                with ng.utils.staged_outputs():
                    ng.utils.atomic_write(os.path.join(tmp, "c.txt"), "c")
                    ng.utils.atomic_write(first, "changed")
                    raise ValueError("late failure")
            self.assertEqual(sorted(os.listdir(tmp)), ["a.txt", "b.txt"], "nothing new and no temporary files")
            with open(first) as f:
                self.assertEqual(f.read(), "a", "existing output untouched on failure")

    def test_flat_index(self):

        dims = (4, 3, 2, 2)
        grid = np.arange(48).reshape(dims, order = "F")
        for ijkt in ((0, 0, 0, 0), (3, 0, 0, 0), (1, 2, 1, 0), (3, 2, 1, 1)):
            self.assertEqual(ng.utils.flat_index(*ijkt, dims), grid[ijkt], f"flat position of {ijkt}")

    def test_ball_structure(self):

        self.assertEqual(int(ng.utils.ball_structure(1).sum()), 7, "radius 1 is the six neighbour cross")
        self.assertEqual(int(ng.utils.ball_structure(2).sum()), 33, "radius 2 ball")
        self.assertEqual(ng.utils.ball_structure(3).shape, (7, 7, 7), "side 2r + 1")

    def test_pad_array(self):

        padded = ng.utils.pad_array(np.ones((2, 3, 4, 5)), 2)
        self.assertEqual(padded.shape, (6, 7, 8, 5), "time axis is not padded")
        self.assertEqual(padded.sum(), 120, "padding is zero")


class TestLogging(unittest.TestCase):

    def tearDown(self):
        ng.NG_config.set_logging_output()

    def test_file_output(self):

        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "run.log")
            ng.NG_config.set_logging_output(stream = False, filename = path)
            ng.NG_config.ng_logger.info("segmenting subject 7")
            for handler in ng.NG_config.ng_logger.handlers:
                handler.flush()
            with open(path, "r") as f:
                self.assertIn("INFO: segmenting subject 7", f.read(), "message reaches the log file")
            self.assertFalse(
                any(type(h) is logging.StreamHandler for h in ng.NG_config.ng_logger.handlers),
                "no stderr handler when the stream is off",
            )
            for handler in list(ng.NG_config.ng_logger.handlers):
                if isinstance(handler, logging.FileHandler):
                    handler.close()
                    ng.NG_config.ng_logger.removeHandler(handler)

    def test_silent(self):

        ng.NG_config.set_logging_output(stream = False)
        self.assertTrue(
            any(isinstance(h, logging.NullHandler) for h in ng.NG_config.ng_logger.handlers),
            "a null handler swallows messages",
        )


if __name__ == "__main__":
    unittest.main()
