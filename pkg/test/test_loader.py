# coding: utf-8

"""
    SynMatch

    Sample cache, seeded streams and batch view preparation.
"""  # noqa: E501


import os
import shutil
import tempfile
import unittest

import numpy as np

from synmatch.data.formats import save_manifest, write_image
from synmatch.data.loader import SampleStore, UNLABELED_AUG_STREAM, prepare_views, sample_batch, stream_rng
from synmatch.data.split import build_split
from synmatch.data.synthetic import generate_synthetic_dataset
from synmatch.exceptions import ConfigError
from synmatch.models.setting import Setting


class TestLoader(unittest.TestCase):
    """loader unit test stubs"""

    def setUp(self) -> None:
        self.tmpdir = tempfile.mkdtemp(prefix="synmatch-loader-")
        manifest = generate_synthetic_dataset(self.tmpdir, n=12, size=16, classes=3, seed=0)
        self.manifest = build_split(manifest, Setting.BSL, 0.25, seed=0)
        self.store = SampleStore(self.manifest)

    def tearDown(self) -> None:
        shutil.rmtree(self.tmpdir, ignore_errors=True)

    def test_stream_rng(self) -> None:
        """Test case for independent, reproducible streams"""
        a = stream_rng(0, 1, 2, 3).random(4)
        np.testing.assert_array_equal(a, stream_rng(0, 1, 2, 3).random(4))
        self.assertFalse(np.array_equal(a, stream_rng(0, 1, 2, 4).random(4)))
        self.assertFalse(np.array_equal(a, stream_rng(0, 1, 2, 3, 0).random(4)))

    def test_sample_batch(self) -> None:
        """Test case for replacement only when the pool is small"""
        rng = np.random.default_rng(0)
        picks = sample_batch(rng, 10, 5)
        self.assertEqual(len(set(picks.tolist())), 5)
        picks = sample_batch(rng, 2, 6)
        self.assertEqual(len(picks), 6)
        self.assertTrue(set(picks.tolist()) <= {0, 1})
        self.assertEqual(len(sample_batch(rng, 0, 4)), 0)

    def test_store_reads_and_caches(self) -> None:
        """Test case for images, training labels and ground truths"""
        labeled = self.manifest.split.labeled
        images = self.store.images(labeled)
        self.assertEqual(images.shape, (len(labeled), 1, 16, 16))
        self.assertIs(self.store.image(labeled[0]), self.store.image(labeled[0]))
        scribble = self.store.label(labeled[0])
        truth = self.store.ground_truth(labeled[0])
        annotated = scribble != 255
        np.testing.assert_array_equal(scribble[annotated], truth[annotated])
        self.assertEqual(self.store.ground_truths(labeled).shape, (len(labeled), 16, 16))

    def test_unlabeled_sample_has_no_label(self) -> None:
        """Test case for asking an unlabeled sample for its training label"""
        with self.assertRaises(ConfigError):
            self.store.label(self.manifest.split.unlabeled[0])
        # the measurement map is still there
        self.assertEqual(self.store.ground_truth(self.manifest.split.unlabeled[0]).shape, (16, 16))

    def test_channel_mismatch(self) -> None:
        """Test case for an image that disagrees with the manifest"""
        sample = self.manifest.samples[0]
        write_image(os.path.join(self.tmpdir, sample.image_path), np.zeros((3, 16, 16)))
        with self.assertRaises(ConfigError):
            SampleStore(self.manifest).image(sample.id)

    def test_prepare_views_independent_of_threads(self) -> None:
        """Test case for identical views with one and four workers"""
        images = self.store.images(self.manifest.split.unlabeled[:4])
        one = prepare_views(images, 0, 1, 2, UNLABELED_AUG_STREAM, threads=1)
        four = prepare_views(images, 0, 1, 2, UNLABELED_AUG_STREAM, threads=4)
        np.testing.assert_array_equal(one.weak, four.weak)
        np.testing.assert_array_equal(one.strong, four.strong)
        self.assertEqual(one.strong_records, four.strong_records)
        for weak, strong in zip(one.weak_records, one.strong_records):
            self.assertEqual(weak.geometric, strong.geometric)

    def test_prepare_views_depend_on_step(self) -> None:
        """Test case for fresh views each step"""
        images = self.store.images(self.manifest.split.unlabeled[:2])
        a = prepare_views(images, 0, 1, 0, UNLABELED_AUG_STREAM)
        b = prepare_views(images, 0, 1, 1, UNLABELED_AUG_STREAM)
        self.assertNotEqual(a.strong_records, b.strong_records)

    def test_store_after_reload(self) -> None:
        """Test case for a manifest written back to disk"""
        save_manifest(self.manifest, self.tmpdir)
        store = SampleStore(self.manifest)
        self.assertEqual(store.image(self.manifest.split.val[0]).shape, (1, 16, 16))


if __name__ == '__main__':
    unittest.main()
