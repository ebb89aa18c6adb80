# coding: utf-8

"""
    SynMatch

    STEN1 tensor container, PGM/PPM images and label maps, dataset manifests.
"""  # noqa: E501


import os
import shutil
import struct
import tempfile
import unittest

import numpy as np

from synmatch.data.formats import (
    MANIFEST_NAME, STEN_MAGIC, decode_tensor, encode_tensor, image_suffix, load_manifest, read_image, read_label,
    read_tensor, resolve, save_manifest, write_image, write_label, write_tensor,
)
from synmatch.exceptions import FormatError, TruncatedFileError
from synmatch.models.dataset_manifest import DatasetManifest
from synmatch.models.label_kind import LabelKind
from synmatch.models.sample import Sample


class TestFormats(unittest.TestCase):
    """formats unit test stubs"""

    def setUp(self) -> None:
        self.tmpdir = tempfile.mkdtemp(prefix="synmatch-formats-")

    def tearDown(self) -> None:
        shutil.rmtree(self.tmpdir, ignore_errors=True)

    def path(self, name: str) -> str:
        return os.path.join(self.tmpdir, name)

    def test_encode_tensor_layout(self) -> None:
        """Test case for the byte layout of a small f32 tensor"""
        buf = encode_tensor(np.array([[1.0, 2.0, 3.0]], dtype=np.float32))
        self.assertEqual(buf[:5], STEN_MAGIC)
        self.assertEqual(buf[5:7], bytes([0, 2]))
        self.assertEqual(struct.unpack("<2I", buf[7:15]), (1, 3))
        self.assertEqual(np.frombuffer(buf[15:], dtype="<f4").tolist(), [1.0, 2.0, 3.0])

    def test_tensor_file_round_trip(self) -> None:
        """Test case for write_tensor/read_tensor with f32 and u8"""
        rng = np.random.default_rng(0)
        for array in (rng.normal(size=(2, 3, 4)).astype(np.float32), rng.integers(0, 255, size=(5,), dtype=np.uint8)):
            path = self.path("t.sten")
            write_tensor(path, array)
            back = read_tensor(path)
            self.assertEqual(back.dtype, array.dtype)
            np.testing.assert_array_equal(back, array)

    def test_unsupported_dtype(self) -> None:
        """Test case for float64 arrays"""
        with self.assertRaises(FormatError):
            encode_tensor(np.zeros(3))

    def test_decode_consecutive(self) -> None:
        """Test case for the returned offset"""
        a = np.arange(4, dtype=np.uint8)
        b = np.ones((2, 2), dtype=np.float32)
        buf = encode_tensor(a) + encode_tensor(b)
        first, offset = decode_tensor(buf)
        second, end = decode_tensor(buf, offset)
        np.testing.assert_array_equal(first, a)
        np.testing.assert_array_equal(second, b)
        self.assertEqual(end, len(buf))

    def test_truncated(self) -> None:
        """Test case for header, dims and payload cut short"""
        buf = encode_tensor(np.ones((2, 2), dtype=np.float32))
        for cut in (3, 9, len(buf) - 1):
            with self.assertRaises(TruncatedFileError):
                decode_tensor(buf[:cut])

    def test_bad_magic_and_dtype(self) -> None:
        """Test case for corrupt headers"""
        buf = encode_tensor(np.ones(2, dtype=np.float32))
        with self.assertRaises(FormatError):
            decode_tensor(b"XTEN1" + buf[5:])
        with self.assertRaises(FormatError):
            decode_tensor(buf[:5] + bytes([9]) + buf[6:])

    def test_trailing_bytes(self) -> None:
        """Test case for a file with bytes after the payload"""
        path = self.path("t.sten")
        with open(path, "wb") as handle:
            handle.write(encode_tensor(np.ones(2, dtype=np.float32)) + b"\x00")
        with self.assertRaises(FormatError) as ctx:
            read_tensor(path)
        self.assertNotIsInstance(ctx.exception, TruncatedFileError)

    def test_image_round_trip(self) -> None:
        """Test case for 8-bit quantization of gray and RGB images"""
        rng = np.random.default_rng(1)
        for channels in (1, 3):
            image = rng.uniform(size=(channels, 6, 5))
            path = self.path("img" + image_suffix(channels))
            write_image(path, image)
            back = read_image(path)
            self.assertEqual(back.shape, (channels, 6, 5))
            self.assertEqual(back.dtype, np.float32)
            np.testing.assert_allclose(back, np.rint(image * 255.0) / 255.0, atol=1e-6)

    def test_image_shape_checked(self) -> None:
        """Test case for images with two channels"""
        with self.assertRaises(FormatError):
            write_image(self.path("bad.pgm"), np.zeros((2, 4, 4)))

    def test_label_round_trip(self) -> None:
        """Test case for raw class values including the ignore index"""
        label = np.array([[0, 1, 2], [255, 3, 0]])
        path = self.path("label.pgm")
        write_label(path, label)
        back = read_label(path)
        self.assertEqual(back.dtype, np.int64)
        np.testing.assert_array_equal(back, label)

    def test_label_validation(self) -> None:
        """Test case for values beyond u8 and wrong rank"""
        with self.assertRaises(FormatError):
            write_label(self.path("l.pgm"), np.array([[0, 256]]))
        with self.assertRaises(FormatError):
            write_label(self.path("l.pgm"), np.zeros((1, 2, 2), dtype=np.int64))

    def test_label_must_be_grayscale(self) -> None:
        """Test case for reading an RGB file as a label map"""
        path = self.path("rgb.ppm")
        write_image(path, np.zeros((3, 2, 2)))
        with self.assertRaises(FormatError):
            read_label(path)

    def test_manifest_round_trip(self) -> None:
        """Test case for save_manifest/load_manifest and path resolution"""
        manifest = DatasetManifest(
            name="toy", num_classes=3, image_size=8, in_channels=1,
            samples=[Sample(id="a", image_path="images/a.pgm", label_kind=LabelKind.DENSE,
                           label_path="gt/a.pgm", gt_path="gt/a.pgm")],
        )
        path = save_manifest(manifest, self.tmpdir)
        self.assertEqual(path, self.path(MANIFEST_NAME))
        back = load_manifest(self.tmpdir)
        self.assertEqual(back.samples[0].id, "a")
        self.assertEqual(back.num_classes, 3)
        self.assertEqual(resolve(back, "images/a.pgm"), os.path.join(os.path.abspath(self.tmpdir), "images/a.pgm"))
        self.assertEqual(load_manifest(path).name, "toy")

    def test_missing_manifest(self) -> None:
        """Test case for a directory without a manifest"""
        with self.assertRaises(FormatError):
            load_manifest(self.tmpdir)


if __name__ == '__main__':
    unittest.main()
