# coding: utf-8

"""
    SynMatch

    Synthetic segmentation corpus generation.
"""  # noqa: E501


import os
import shutil
import tempfile
import unittest

import numpy as np

from synmatch.data.formats import load_manifest, read_image, read_label, resolve
from synmatch.data.scribble import COVERAGE_MAX, COVERAGE_MIN, IGNORE_INDEX, scribble_coverage
from synmatch.data.synthetic import (
    AREA_MAX, AREA_MIN, class_level, dominant_class, generate_synthetic_dataset, render_sample, tint,
)
from synmatch.exceptions import ConfigError
from synmatch.models.label_kind import LabelKind


class TestSynthetic(unittest.TestCase):
    """generate_synthetic_dataset unit test stubs"""

    def setUp(self) -> None:
        self.tmpdir = tempfile.mkdtemp(prefix="synmatch-synthetic-")

    def tearDown(self) -> None:
        shutil.rmtree(self.tmpdir, ignore_errors=True)

    def test_generate(self) -> None:
        """Test case for files, manifest and label statistics"""
        out = os.path.join(self.tmpdir, "toy")
        manifest = generate_synthetic_dataset(out, n=10, size=64, classes=3, seed=0)
        self.assertEqual(len(manifest.samples), 10)
        self.assertEqual(manifest.name, "toy")
        loaded = load_manifest(out)
        self.assertEqual([s.id for s in loaded.samples], [s.id for s in manifest.samples])
        self.assertIsNone(loaded.setting)
        for sample in loaded.samples:
            self.assertEqual(sample.label_kind, LabelKind.NONE)
            image = read_image(resolve(loaded, sample.image_path))
            label = read_label(resolve(loaded, sample.gt_path))
            scribble = read_label(resolve(loaded, sample.scribble_path))
            self.assertEqual(image.shape, (1, 64, 64))
            self.assertTrue(set(np.unique(label)) <= {0, 1, 2})
            fraction = float((label > 0).mean())
            self.assertGreaterEqual(fraction, AREA_MIN)
            self.assertLessEqual(fraction, AREA_MAX)
            annotated = scribble != IGNORE_INDEX
            np.testing.assert_array_equal(scribble[annotated], label[annotated])
            self.assertEqual(sample.dominant_class, dominant_class(label, 3))

    def test_deterministic(self) -> None:
        """Test case for identical bytes from the same seed"""
        a = generate_synthetic_dataset(os.path.join(self.tmpdir, "a"), n=3, size=16, classes=3, seed=4)
        generate_synthetic_dataset(os.path.join(self.tmpdir, "b"), n=3, size=16, classes=3, seed=4)
        for sample in a.samples:
            for rel in (sample.image_path, sample.gt_path, sample.scribble_path):
                with open(os.path.join(self.tmpdir, "a", rel), "rb") as fa, \
                        open(os.path.join(self.tmpdir, "b", rel), "rb") as fb:
                    self.assertEqual(fa.read(), fb.read())

    def test_rgb(self) -> None:
        """Test case for three-channel images"""
        manifest = generate_synthetic_dataset(self.tmpdir, n=2, size=16, classes=2, seed=1, channels=3)
        self.assertEqual(manifest.in_channels, 3)
        sample = manifest.samples[0]
        self.assertTrue(sample.image_path.endswith(".ppm"))
        self.assertEqual(read_image(resolve(manifest, sample.image_path)).shape, (3, 16, 16))

    def test_invalid_arguments(self) -> None:
        """Test case for size, classes, channels and n validation"""
        for kwargs in ({"size": 12}, {"classes": 1}, {"channels": 2}, {"n": 0}):
            with self.assertRaises(ConfigError):
                generate_synthetic_dataset(self.tmpdir, **dict({"n": 1, "size": 16}, **kwargs))

    def test_corpus_statistics(self) -> None:
        """Test case for class presence and scribble coverage over a generated corpus"""
        manifest = generate_synthetic_dataset(self.tmpdir, n=40, size=32, classes=3, seed=3)
        present = np.zeros(3, dtype=np.int64)
        for sample in manifest.samples:
            label = read_label(resolve(manifest, sample.gt_path))
            scribble = read_label(resolve(manifest, sample.scribble_path))
            present += np.isin(np.arange(3), label)
            coverage = scribble_coverage(scribble)
            self.assertGreaterEqual(coverage, COVERAGE_MIN, sample.id)
            self.assertLessEqual(coverage, COVERAGE_MAX, sample.id)
        self.assertTrue(np.all(present >= 0.9 * len(manifest.samples)), present)

    def test_custom_ignore_index(self) -> None:
        """Test case for scribbles written with a non-default fill value"""
        manifest = generate_synthetic_dataset(self.tmpdir, n=2, size=16, classes=3, seed=0, ignore_index=250)
        self.assertEqual(manifest.ignore_index, 250)
        self.assertEqual(load_manifest(self.tmpdir).ignore_index, 250)
        scribble = read_label(resolve(manifest, manifest.samples[0].scribble_path))
        self.assertIn(250, np.unique(scribble))
        self.assertNotIn(IGNORE_INDEX, np.unique(scribble))
        with self.assertRaises(ConfigError):
            generate_synthetic_dataset(self.tmpdir, n=1, size=16, classes=3, ignore_index=2)

    def test_render_sample_levels(self) -> None:
        """Test case for foreground intensities near their class level"""
        image, label = render_sample(32, 3, np.random.default_rng(2))
        self.assertEqual(image.dtype, np.float32)
        for cls in (1, 2):
            mean = float(image[0][label == cls].mean())
            self.assertAlmostEqual(mean, class_level(cls, 3), delta=0.08)
        self.assertLess(float(image[0][label == 0].mean()), 0.4)

    def test_tint(self) -> None:
        """Test case for the colour cast"""
        gray = np.full((1, 4, 4), 0.5, dtype=np.float32)
        rgb = tint(gray, np.random.default_rng(0))
        self.assertEqual(rgb.shape, (3, 4, 4))
        self.assertTrue(np.all(rgb >= 0.4) and np.all(rgb <= 0.6))

    def test_dominant_class(self) -> None:
        """Test case for the largest foreground class"""
        label = np.array([[0, 0, 2], [1, 2, 2]])
        self.assertEqual(dominant_class(label, 3), 2)
        self.assertEqual(dominant_class(np.zeros((2, 2), dtype=np.int64), 3), 0)


if __name__ == '__main__':
    unittest.main()
